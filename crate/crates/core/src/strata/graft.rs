use crate::graph::{HalfEdge, StableGraph};

/// The graph obtained by replacing each vertex `v` of a base graph by an inner
/// graph whose legs are the half-edges of `v` in slot order.
pub(crate) struct Grafted {
    pub graph: StableGraph,
    /// Base half-edge to grafted half-edge. Base edge `e` keeps index `e`.
    pub base_half: Vec<HalfEdge>,
    /// `inner_vertex[v][w]`: vertex `w` of the graph grafted at `v`.
    pub inner_vertex: Vec<Vec<usize>>,
    /// `inner_half[v][h]`: half-edge `h` of the graph grafted at `v`.
    pub inner_half: Vec<Vec<HalfEdge>>,
    /// Indices of the edges coming from inner graphs.
    pub new_edges: Vec<usize>,
}

pub(crate) fn graft(base: &StableGraph, inner: &[&StableGraph]) -> Grafted {
    let nv = base.num_vertices();
    let n = base.num_legs();
    let mut offset = Vec::with_capacity(nv);
    let mut genera = Vec::new();
    for g in inner {
        offset.push(genera.len());
        genera.extend_from_slice(g.genera());
    }
    let slots: Vec<Vec<HalfEdge>> = (0..nv).map(|v| base.half_edges_at(v)).collect();
    // grafted vertex of each base half-edge
    let mut at = vec![0usize; base.num_half_edges()];
    for v in 0..nv {
        for (j, &h) in slots[v].iter().enumerate() {
            at[h] = offset[v] + inner[v].legs()[j];
        }
    }
    let legs: Vec<usize> = (0..n).map(|i| at[i]).collect();
    let mut edges: Vec<(usize, usize)> = (0..base.num_edges())
        .map(|e| (at[base.side(e, 0)], at[base.side(e, 1)]))
        .collect();
    let mut new_edges = Vec::new();
    let mut inner_edge_index: Vec<Vec<usize>> = Vec::with_capacity(nv);
    for v in 0..nv {
        let mut idx = Vec::new();
        for &(a, b) in inner[v].edges() {
            idx.push(edges.len());
            new_edges.push(edges.len());
            edges.push((offset[v] + a, offset[v] + b));
        }
        inner_edge_index.push(idx);
    }
    let total_half = n + 2 * edges.len();
    let side = |e: usize, s: usize| n + 2 * e + s;
    let base_half: Vec<HalfEdge> = (0..base.num_half_edges())
        .map(|h| match base.edge_of(h) {
            None => h,
            Some((e, s)) => side(e, s),
        })
        .collect();
    let mut inner_vertex = Vec::with_capacity(nv);
    let mut inner_half = Vec::with_capacity(nv);
    for v in 0..nv {
        let g = inner[v];
        inner_vertex.push((0..g.num_vertices()).map(|w| offset[v] + w).collect());
        let hs: Vec<HalfEdge> = (0..g.num_half_edges())
            .map(|h| match g.edge_of(h) {
                None => base_half[slots[v][h]],
                Some((f, s)) => side(inner_edge_index[v][f], s),
            })
            .collect();
        inner_half.push(hs);
    }
    let graph = StableGraph::new_unchecked(genera, legs, edges);
    debug_assert_eq!(graph.num_half_edges(), total_half);
    Grafted {
        graph,
        base_half,
        inner_vertex,
        inner_half,
        new_edges,
    }
}
