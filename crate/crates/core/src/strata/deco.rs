use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::graph::{HalfEdge, StableGraph};
use crate::Q;

/// κ-monomials per vertex (sorted indices, each ≥ 1) and ψ-exponents per half-edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Deco {
    pub kappa: Vec<Vec<u32>>,
    pub psi: Vec<u32>,
}

impl Deco {
    pub fn unit(graph: &StableGraph) -> Self {
        Deco {
            kappa: vec![Vec::new(); graph.num_vertices()],
            psi: vec![0; graph.num_half_edges()],
        }
    }

    pub fn degree(&self) -> usize {
        self.kappa
            .iter()
            .flatten()
            .map(|&a| a as usize)
            .sum::<usize>()
            + self.psi.iter().map(|&p| p as usize).sum::<usize>()
    }
}

/// Vertex incidence and dimensions of a fixed graph.
pub(crate) struct Frame {
    pub hv: Vec<usize>,
    pub dims: Vec<usize>,
}

impl Frame {
    pub fn new(graph: &StableGraph) -> Self {
        Frame {
            hv: (0..graph.num_half_edges()).map(|h| graph.vertex_of(h)).collect(),
            dims: (0..graph.num_vertices()).map(|v| graph.vertex_dim(v)).collect(),
        }
    }

    pub fn vertex_degrees(&self, d: &Deco) -> Vec<usize> {
        let mut deg: Vec<usize> = d
            .kappa
            .iter()
            .map(|k| k.iter().map(|&a| a as usize).sum())
            .collect();
        for (h, &p) in d.psi.iter().enumerate() {
            deg[self.hv[h]] += p as usize;
        }
        deg
    }

    pub fn fits(&self, d: &Deco) -> bool {
        self.vertex_degrees(d)
            .iter()
            .zip(&self.dims)
            .all(|(a, b)| a <= b)
    }

    pub fn is_top(&self, d: &Deco) -> bool {
        self.vertex_degrees(d) == self.dims
    }
}

pub(crate) type Poly = HashMap<Deco, Q>;

pub(crate) fn mul_deco(a: &Deco, b: &Deco) -> Deco {
    let kappa = a
        .kappa
        .iter()
        .zip(&b.kappa)
        .map(|(x, y)| {
            let mut m = x.clone();
            m.extend_from_slice(y);
            m.sort_unstable();
            m
        })
        .collect();
    let psi = a.psi.iter().zip(&b.psi).map(|(x, y)| x + y).collect();
    Deco { kappa, psi }
}

fn add_into(p: &mut Poly, d: Deco, c: Q) {
    if c.is_zero() {
        return;
    }
    match p.entry(d) {
        std::collections::hash_map::Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
        std::collections::hash_map::Entry::Vacant(v) => {
            v.insert(c);
        }
    }
}

/// Product truncated to the per-vertex dimension bound.
pub(crate) fn poly_mul(a: &Poly, b: &Poly, frame: &Frame) -> Poly {
    let mut out = Poly::new();
    for (da, ca) in a {
        for (db, cb) in b {
            let d = mul_deco(da, db);
            if frame.fits(&d) {
                add_into(&mut out, d, ca * cb);
            }
        }
    }
    out
}

/// `Σ_{w ∈ vertices} κ_a[w]` as a polynomial.
pub(crate) fn kappa_sum(graph: &StableGraph, vertices: &[usize], a: u32) -> Poly {
    let mut p = Poly::new();
    for &w in vertices {
        let mut d = Deco::unit(graph);
        d.kappa[w].push(a);
        add_into(&mut p, d, Q::one());
    }
    p
}

/// `c_1 ψ_{h_1} + c_2 ψ_{h_2} + …` as a polynomial.
pub(crate) fn psi_linear(graph: &StableGraph, terms: &[(HalfEdge, Q)]) -> Poly {
    let mut p = Poly::new();
    for (h, c) in terms {
        let mut d = Deco::unit(graph);
        d.psi[*h] += 1;
        add_into(&mut p, d, c.clone());
    }
    p
}

