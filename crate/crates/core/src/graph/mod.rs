//! Stable graphs indexing the boundary strata of `M̄_{g,n}`.
//!
//! A [`StableGraph`] stores vertex genera, the vertex carrying each leg, and
//! the two endpoints of each edge. Half-edges are numbered implicitly: legs
//! come first (half-edge `i` is the leg of marking `i + 1`), followed by the
//! two sides of every edge (`n + 2e` is side `a` of edge `e`, `n + 2e + 1` is
//! side `b`). The involution fixes legs and swaps the sides of an edge.

mod canon;
mod enumerate;
mod iso;
mod star;

pub use canon::{canonical_form, CanonLabeling, GraphRelabeling};
pub(crate) use canon::{apply_order, canonical_order};
pub use enumerate::{enumerate_stable_graphs, stable_graphs_cached};
pub use iso::{isomorphisms, Isomorphism};
pub use star::{enumerate_simple_star_graphs, StarFilter, StarGraph};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Index of a half-edge, see the module documentation for the numbering.
pub type HalfEdge = usize;

/// A connected stable graph of genus `g` with `n` labelled legs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StableGraph {
    genera: Vec<u32>,
    legs: Vec<usize>,
    edges: Vec<(usize, usize)>,
}

impl StableGraph {
    /// Builds a graph and checks connectivity and stability at every vertex.
    pub fn new(genera: Vec<u32>, legs: Vec<usize>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let graph = StableGraph {
            genera,
            legs,
            edges,
        };
        graph.validate("new")?;
        Ok(graph)
    }

    pub(crate) fn new_unchecked(
        genera: Vec<u32>,
        legs: Vec<usize>,
        edges: Vec<(usize, usize)>,
    ) -> Self {
        StableGraph {
            genera,
            legs,
            edges,
        }
    }

    /// The graph with a single vertex of genus `g` carrying `n` legs.
    pub fn trivial(g: u32, n: usize) -> Self {
        StableGraph {
            genera: vec![g],
            legs: vec![0; n],
            edges: Vec::new(),
        }
    }

    pub fn genera(&self) -> &[u32] {
        &self.genera
    }

    pub fn legs(&self) -> &[usize] {
        &self.legs
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn num_vertices(&self) -> usize {
        self.genera.len()
    }

    pub fn num_legs(&self) -> usize {
        self.legs.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_half_edges(&self) -> usize {
        self.legs.len() + 2 * self.edges.len()
    }

    /// First Betti number `|E| - |V| + 1`.
    pub fn h1(&self) -> u32 {
        (self.edges.len() + 1 - self.genera.len()) as u32
    }

    /// Arithmetic genus `Σ g(v) + h¹(Γ)`.
    pub fn genus(&self) -> u32 {
        self.genera.iter().sum::<u32>() + self.h1()
    }

    pub fn leg(&self, marking: usize) -> HalfEdge {
        marking
    }

    pub fn side(&self, edge: usize, side: usize) -> HalfEdge {
        self.legs.len() + 2 * edge + side
    }

    pub fn is_leg(&self, h: HalfEdge) -> bool {
        h < self.legs.len()
    }

    /// For an edge side, `(edge, side)`.
    pub fn edge_of(&self, h: HalfEdge) -> Option<(usize, usize)> {
        if h < self.legs.len() {
            None
        } else {
            let k = h - self.legs.len();
            Some((k / 2, k % 2))
        }
    }

    pub fn vertex_of(&self, h: HalfEdge) -> usize {
        match self.edge_of(h) {
            None => self.legs[h],
            Some((e, 0)) => self.edges[e].0,
            Some((e, _)) => self.edges[e].1,
        }
    }

    /// The involution ι on half-edges.
    pub fn involution(&self, h: HalfEdge) -> HalfEdge {
        match self.edge_of(h) {
            None => h,
            Some((e, s)) => self.side(e, 1 - s),
        }
    }

    pub fn is_self_edge(&self, e: usize) -> bool {
        self.edges[e].0 == self.edges[e].1
    }

    /// Half-edges at `v` in slot order: legs by marking, then edge sides by index.
    pub fn half_edges_at(&self, v: usize) -> Vec<HalfEdge> {
        (0..self.num_half_edges())
            .filter(|&h| self.vertex_of(h) == v)
            .collect()
    }

    /// Valence `n(v)`, counting legs and half-edges.
    pub fn valence(&self, v: usize) -> usize {
        self.legs.iter().filter(|&&w| w == v).count()
            + self
                .edges
                .iter()
                .map(|&(a, b)| usize::from(a == v) + usize::from(b == v))
                .sum::<usize>()
    }

    /// Dimension `3g(v) - 3 + n(v)` of the vertex moduli space.
    pub fn vertex_dim(&self, v: usize) -> usize {
        (3 * self.genera[v] as usize + self.valence(v)) - 3
    }

    /// Dimension `3g - 3 + n` of the ambient moduli space.
    pub fn ambient_dim(&self) -> usize {
        3 * self.genus() as usize + self.legs.len() - 3
    }

    pub fn markings_at(&self, v: usize) -> Vec<usize> {
        (0..self.legs.len()).filter(|&i| self.legs[i] == v).collect()
    }

    pub fn is_connected(&self) -> bool {
        let nv = self.genera.len();
        if nv == 0 {
            return false;
        }
        let mut seen = vec![false; nv];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(a, b) in &self.edges {
                for (x, y) in [(a, b), (b, a)] {
                    if x == v && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn is_stable(&self) -> bool {
        (0..self.num_vertices()).all(|v| 2 * self.genera[v] as usize + self.valence(v) > 2)
    }

    pub(crate) fn validate(&self, op: &'static str) -> Result<()> {
        let nv = self.genera.len();
        let bad = |reason: String| Err(Error::InvalidGraph { op, reason });
        if nv == 0 {
            return bad("no vertices".into());
        }
        if let Some(&v) = self.legs.iter().find(|&&v| v >= nv) {
            return bad(format!("leg attached to missing vertex {v}"));
        }
        if let Some(&(a, b)) = self.edges.iter().find(|&&(a, b)| a >= nv || b >= nv) {
            return bad(format!("edge ({a}, {b}) references a missing vertex"));
        }
        if !self.is_connected() {
            return bad("graph is not connected".into());
        }
        for v in 0..nv {
            if 2 * self.genera[v] as usize + self.valence(v) <= 2 {
                return bad(format!("vertex {v} is unstable"));
            }
        }
        Ok(())
    }

    /// Contracts the given edges. Returns the contracted graph, the vertex map
    /// and, for each surviving edge of `self`, its index in the result.
    pub fn contract(&self, contracted: &[bool]) -> (StableGraph, Vec<usize>, Vec<Option<usize>>) {
        let nv = self.num_vertices();
        let mut parent: Vec<usize> = (0..nv).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nxt = p[y];
                p[y] = r;
                y = nxt;
            }
            r
        }
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            if contracted[e] {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
        let mut index = vec![usize::MAX; nv];
        let mut count = 0;
        let mut vmap = vec![0; nv];
        for v in 0..nv {
            let r = find(&mut parent, v);
            if index[r] == usize::MAX {
                index[r] = count;
                count += 1;
            }
            vmap[v] = index[r];
        }
        let mut genera = vec![0u32; count];
        for v in 0..nv {
            genera[vmap[v]] += self.genera[v];
        }
        // each contracted edge adds one to the loop count of its class
        let mut comp_edges = vec![0u32; count];
        let mut comp_verts = vec![0u32; count];
        for v in 0..nv {
            comp_verts[vmap[v]] += 1;
        }
        for (e, &(a, _)) in self.edges.iter().enumerate() {
            if contracted[e] {
                comp_edges[vmap[a]] += 1;
            }
        }
        for c in 0..count {
            genera[c] += comp_edges[c] + 1 - comp_verts[c];
        }
        let legs = self.legs.iter().map(|&v| vmap[v]).collect();
        let mut edges = Vec::new();
        let mut emap = vec![None; self.edges.len()];
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            if !contracted[e] {
                emap[e] = Some(edges.len());
                edges.push((vmap[a], vmap[b]));
            }
        }
        (StableGraph { genera, legs, edges }, vmap, emap)
    }

    /// Applies a permutation of markings: leg `i` becomes leg `perm[i]`.
    pub fn relabel_legs(&self, perm: &[usize]) -> StableGraph {
        let mut legs = vec![0; self.legs.len()];
        for (i, &v) in self.legs.iter().enumerate() {
            legs[perm[i]] = v;
        }
        StableGraph {
            genera: self.genera.clone(),
            legs,
            edges: self.edges.clone(),
        }
    }
}

impl std::fmt::Display for StableGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for v in 0..self.num_vertices() {
            if v > 0 {
                write!(f, ", ")?;
            }
            let marks: Vec<String> = self
                .markings_at(v)
                .iter()
                .map(|i| (i + 1).to_string())
                .collect();
            write!(f, "g{}{{{}}}", self.genera[v], marks.join(","))?;
        }
        write!(f, "]")?;
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            write!(f, " e{e}:{a}-{b}")?;
        }
        Ok(())
    }
}
