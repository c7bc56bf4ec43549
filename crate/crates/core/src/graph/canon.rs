//! Canonical vertex orderings by color refinement followed by an exhaustive
//! search over the orderings compatible with the refined colors.

use super::{HalfEdge, StableGraph};

/// A normalized edge `(pos_a, psi_a, pos_b, psi_b)` with `(pos_a, psi_a) <= (pos_b, psi_b)`.
pub(crate) type EdgeKey = (usize, u32, usize, u32);

/// Result of the canonical ordering search.
#[derive(Clone, Debug)]
pub(crate) struct CanonOrder {
    /// `pos[v]` is the canonical position of vertex `v`.
    pub pos: Vec<usize>,
    /// Number of vertex orderings attaining the canonical encoding, i.e. the
    /// number of vertex permutations extending to an automorphism.
    pub vertex_autos: usize,
    /// Sorted, normalized edges under `pos`.
    pub edges: Vec<EdgeKey>,
}

fn normalize(pa: usize, sa: u32, pb: usize, sb: u32) -> EdgeKey {
    if (pa, sa) <= (pb, sb) {
        (pa, sa, pb, sb)
    } else {
        (pb, sb, pa, sa)
    }
}

fn rank<T: Ord + Clone>(sigs: &[T]) -> Vec<usize> {
    let mut distinct: Vec<T> = sigs.to_vec();
    distinct.sort();
    distinct.dedup();
    sigs.iter()
        .map(|s| distinct.binary_search(s).unwrap())
        .collect()
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let first = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, first);
            out.push(p);
        }
    }
    out
}

/// Canonical ordering of a vertex-labelled multigraph with decorated legs and
/// decorated edge sides. `legs[i] = (vertex, psi)`, `edges[e] = (a, psi_a, b, psi_b)`.
pub(crate) fn canonical_order<L: Ord + Clone>(
    vlabels: &[L],
    legs: &[(usize, u32)],
    edges: &[(usize, u32, usize, u32)],
) -> CanonOrder {
    let nv = vlabels.len();
    // initial colors: label, legs, self-edges, local edge ends
    let mut init: Vec<(L, Vec<(usize, u32)>, Vec<(u32, u32)>, Vec<(u32, u32)>)> = vlabels
        .iter()
        .map(|l| (l.clone(), Vec::new(), Vec::new(), Vec::new()))
        .collect();
    for (i, &(v, p)) in legs.iter().enumerate() {
        init[v].1.push((i, p));
    }
    for &(a, pa, b, pb) in edges {
        if a == b {
            init[a].2.push((pa.min(pb), pa.max(pb)));
        } else {
            init[a].3.push((pa, pb));
            init[b].3.push((pb, pa));
        }
    }
    for s in init.iter_mut() {
        s.2.sort();
        s.3.sort();
    }
    let mut color = rank(&init);
    let mut classes = color.iter().copied().max().map_or(0, |m| m + 1);
    loop {
        let mut sigs: Vec<(usize, Vec<(usize, u32, u32)>)> =
            color.iter().map(|&c| (c, Vec::new())).collect();
        for &(a, pa, b, pb) in edges {
            if a != b {
                sigs[a].1.push((color[b], pa, pb));
                sigs[b].1.push((color[a], pb, pa));
            }
        }
        for s in sigs.iter_mut() {
            s.1.sort();
        }
        let next = rank(&sigs);
        let next_classes = next.iter().copied().max().map_or(0, |m| m + 1);
        color = next;
        if next_classes == classes {
            break;
        }
        classes = next_classes;
    }

    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); classes];
    for v in 0..nv {
        groups[color[v]].push(v);
    }
    let group_perms: Vec<Vec<Vec<usize>>> = groups.iter().map(|g| permutations(g)).collect();

    let encode = |pos: &[usize]| -> (Vec<(usize, u32)>, Vec<EdgeKey>) {
        let l: Vec<(usize, u32)> = legs.iter().map(|&(v, p)| (pos[v], p)).collect();
        let mut e: Vec<EdgeKey> = edges
            .iter()
            .map(|&(a, pa, b, pb)| normalize(pos[a], pa, pos[b], pb))
            .collect();
        e.sort_unstable();
        (l, e)
    };

    let mut best: Option<((Vec<(usize, u32)>, Vec<EdgeKey>), Vec<usize>)> = None;
    let mut count = 0usize;
    let mut choice = vec![0usize; classes];
    let mut pos = vec![0usize; nv];
    loop {
        let mut p = 0;
        for (c, perms) in group_perms.iter().enumerate() {
            for &v in &perms[choice[c]] {
                pos[v] = p;
                p += 1;
            }
        }
        let enc = encode(&pos);
        match &best {
            Some((b, _)) if enc > *b => {}
            Some((b, _)) if enc == *b => count += 1,
            _ => {
                best = Some((enc, pos.clone()));
                count = 1;
            }
        }
        // advance the mixed-radix counter
        let mut c = 0;
        while c < classes {
            choice[c] += 1;
            if choice[c] < group_perms[c].len() {
                break;
            }
            choice[c] = 0;
            c += 1;
        }
        if c == classes {
            break;
        }
    }
    let ((_, edges), pos) = best.expect("at least one ordering");
    CanonOrder {
        pos,
        vertex_autos: count,
        edges,
    }
}

/// Number of half-edge permutations lifting a fixed vertex permutation that
/// preserves a (decorated) normalized edge list: parallel identical edges can be
/// permuted and symmetric self-edges flipped.
pub(crate) fn edge_symmetry(edges: &[EdgeKey]) -> usize {
    let mut total = 1usize;
    let mut i = 0;
    while i < edges.len() {
        let mut j = i;
        while j < edges.len() && edges[j] == edges[i] {
            j += 1;
        }
        let k = j - i;
        total *= (1..=k).product::<usize>();
        let (a, pa, b, pb) = edges[i];
        if a == b && pa == pb {
            total *= 1 << k;
        }
        i = j;
    }
    total
}

/// How a graph was relabelled into its canonical form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphRelabeling {
    /// `vertex[v]` is the canonical index of vertex `v`.
    pub vertex: Vec<usize>,
    /// `half_edge[h]` is the canonical index of half-edge `h`.
    pub half_edge: Vec<HalfEdge>,
}

/// Canonical data of a graph: the canonical representative, the relabelling
/// and the automorphism group order.
#[derive(Clone, Debug)]
pub struct CanonLabeling {
    pub graph: StableGraph,
    pub relabeling: GraphRelabeling,
    pub automorphisms: usize,
}

/// Builds the relabelled edge list and the half-edge map for a canonical order.
pub(crate) fn apply_order(
    n_legs: usize,
    edges: &[(usize, u32, usize, u32)],
    pos: &[usize],
) -> (Vec<EdgeKey>, Vec<HalfEdge>) {
    let mut keyed: Vec<(EdgeKey, usize, bool)> = edges
        .iter()
        .enumerate()
        .map(|(e, &(a, pa, b, pb))| {
            let flip = (pos[a], pa) > (pos[b], pb);
            (normalize(pos[a], pa, pos[b], pb), e, flip)
        })
        .collect();
    keyed.sort();
    let mut hmap: Vec<HalfEdge> = (0..n_legs + 2 * edges.len()).collect();
    let mut out = Vec::with_capacity(edges.len());
    for (new_e, (key, old_e, flip)) in keyed.into_iter().enumerate() {
        out.push(key);
        let (s0, s1) = if flip { (1, 0) } else { (0, 1) };
        hmap[n_legs + 2 * old_e] = n_legs + 2 * new_e + s0;
        hmap[n_legs + 2 * old_e + 1] = n_legs + 2 * new_e + s1;
    }
    (out, hmap)
}

/// Canonical representative of the isomorphism class of `graph` (isomorphisms
/// fix every leg). Isomorphic inputs give identical outputs.
pub fn canonical_form(graph: &StableGraph) -> CanonLabeling {
    let legs: Vec<(usize, u32)> = graph.legs().iter().map(|&v| (v, 0)).collect();
    let edges: Vec<(usize, u32, usize, u32)> =
        graph.edges().iter().map(|&(a, b)| (a, 0, b, 0)).collect();
    let order = canonical_order(graph.genera(), &legs, &edges);
    let (keys, hmap) = apply_order(graph.num_legs(), &edges, &order.pos);
    let mut genera = vec![0; graph.num_vertices()];
    for (v, &p) in order.pos.iter().enumerate() {
        genera[p] = graph.genera()[v];
    }
    let canon = StableGraph::new_unchecked(
        genera,
        graph.legs().iter().map(|&v| order.pos[v]).collect(),
        keys.iter().map(|&(a, _, b, _)| (a, b)).collect(),
    );
    let automorphisms = order.vertex_autos * edge_symmetry(&keys);
    CanonLabeling {
        graph: canon,
        relabeling: GraphRelabeling {
            vertex: order.pos,
            half_edge: hmap,
        },
        automorphisms,
    }
}

/// Canonical form of a graph with one distinguished vertex; returns the graph
/// and the new index of the distinguished vertex.
pub(crate) fn apply_order_star(graph: &StableGraph, center: usize) -> (StableGraph, usize) {
    let labels: Vec<(u32, bool)> = (0..graph.num_vertices())
        .map(|v| (graph.genera()[v], v != center))
        .collect();
    let legs: Vec<(usize, u32)> = graph.legs().iter().map(|&v| (v, 0)).collect();
    let edges: Vec<(usize, u32, usize, u32)> =
        graph.edges().iter().map(|&(a, b)| (a, 0, b, 0)).collect();
    let order = canonical_order(&labels, &legs, &edges);
    let mut genera = vec![0; graph.num_vertices()];
    for (v, &p) in order.pos.iter().enumerate() {
        genera[p] = graph.genera()[v];
    }
    let canon = StableGraph::new_unchecked(
        genera,
        graph.legs().iter().map(|&v| order.pos[v]).collect(),
        order.edges.iter().map(|&(a, _, b, _)| (a, b)).collect(),
    );
    (canon, order.pos[center])
}

impl StableGraph {
    /// Order of the automorphism group (vertex and half-edge permutations
    /// preserving genera, incidence and the involution, fixing every leg).
    pub fn automorphism_order(&self) -> usize {
        canonical_form(self).automorphisms
    }

    pub fn canonical(&self) -> StableGraph {
        canonical_form(self).graph
    }

    pub fn is_isomorphic(&self, other: &StableGraph) -> bool {
        self.num_legs() == other.num_legs()
            && self.num_edges() == other.num_edges()
            && self.num_vertices() == other.num_vertices()
            && self.canonical() == other.canonical()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(genera: Vec<u32>, legs: Vec<usize>, edges: Vec<(usize, usize)>) -> StableGraph {
        StableGraph::new(genera, legs, edges).unwrap()
    }

    #[test]
    fn trivial_graph_has_no_automorphisms() {
        assert_eq!(StableGraph::trivial(2, 3).automorphism_order(), 1);
    }

    #[test]
    fn self_edge_graph_has_two_automorphisms() {
        let loop11 = g(vec![0], vec![0], vec![(0, 0)]);
        assert_eq!(loop11.automorphism_order(), 2);
        let c = canonical_form(&loop11);
        assert_eq!(canonical_form(&c.graph).graph, c.graph);
    }

    #[test]
    fn banana_presentations_agree() {
        // two genus-0 vertices, two edges, legs 1,2 on one side and 3 on the other
        let b1 = g(vec![0, 0], vec![0, 0, 1], vec![(0, 1), (1, 0)]);
        let b2 = g(vec![0, 0], vec![1, 1, 0], vec![(1, 0), (0, 1)]);
        assert_eq!(b1.canonical(), b2.canonical());
        assert_eq!(b1.automorphism_order(), 2);
    }

    #[test]
    fn star_automorphisms() {
        // center g=0 with legs {3,-1}, two edges to one outlying g=1 vertex
        let v = g(vec![0, 1], vec![0, 0], vec![(0, 1), (0, 1)]);
        assert_eq!(v.automorphism_order(), 2);
        // center g=0 with legs {3,-1}, one edge to each of two g=1 vertices
        let iv = g(vec![0, 1, 1], vec![0, 0], vec![(0, 1), (0, 2)]);
        assert_eq!(iv.automorphism_order(), 2);
    }

    #[test]
    fn two_self_edges_and_swap() {
        // genus-0 vertex with two self-edges and one leg: 2 * 2 * 2! = 8
        let x = g(vec![0], vec![0], vec![(0, 0), (0, 0)]);
        assert_eq!(x.automorphism_order(), 8);
    }

    #[test]
    fn relabeling_maps_half_edges_consistently() {
        let b = g(vec![1, 0], vec![1, 1, 0], vec![(1, 0)]);
        let c = canonical_form(&b);
        for h in 0..b.num_half_edges() {
            let h2 = c.relabeling.half_edge[h];
            assert_eq!(
                c.relabeling.vertex[b.vertex_of(h)],
                c.graph.vertex_of(h2),
                "half-edge {h}"
            );
        }
    }
}
