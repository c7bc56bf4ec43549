//! The strata algebra: formal rational combinations of decorated boundary
//! strata `[Γ, γ] = ξ_{Γ*}(γ)`, where `γ` is a monomial in κ-classes at the
//! vertices and ψ-classes at the half-edges of `Γ`.
//!
//! Pushforwards along `ξ_Γ` are raw: no automorphism factor is divided out.

mod deco;
mod forget;
mod graft;
mod product;

pub(crate) use deco::{poly_mul, psi_linear, Deco, Frame, Poly};
pub use forget::{forget_pullback, forget_pullback_many, forget_pushforward};
pub(crate) use graft::graft;
pub use product::multiply;
pub(crate) use product::{group_by_graph, product_by_graph, Group};

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::graph::{canonical_order, StableGraph};
use crate::{Error, Result, Q};

/// One additive generator `[Γ, γ]`, stored in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DecoratedStratum {
    graph: StableGraph,
    kappa: Vec<Vec<u32>>,
    psi: Vec<u32>,
}

impl DecoratedStratum {
    /// Builds a decorated stratum; `kappa[v]` lists the indices `a ≥ 1` of the
    /// κ-factors at `v` (with repetition) and `psi[h]` the ψ-exponent at `h`.
    /// The result is canonicalized.
    pub fn new(graph: StableGraph, kappa: Vec<Vec<u32>>, psi: Vec<u32>) -> Result<Self> {
        graph.validate("DecoratedStratum::new")?;
        if kappa.len() != graph.num_vertices() || psi.len() != graph.num_half_edges() {
            return Err(Error::input(
                "strata",
                "DecoratedStratum::new",
                "decoration sizes do not match the graph",
            ));
        }
        if kappa.iter().flatten().any(|&a| a == 0) {
            return Err(Error::input(
                "strata",
                "DecoratedStratum::new",
                "κ indices start at 1",
            ));
        }
        Ok(Self::from_deco(graph, Deco { kappa, psi }))
    }

    /// The undecorated stratum `[Γ, 1]`.
    pub fn plain(graph: StableGraph) -> Result<Self> {
        let d = Deco::unit(&graph);
        Self::new(graph, d.kappa, d.psi)
    }

    pub(crate) fn from_deco(graph: StableGraph, mut deco: Deco) -> Self {
        for k in deco.kappa.iter_mut() {
            k.sort_unstable();
        }
        canonicalize(&graph, &deco)
    }

    pub fn graph(&self) -> &StableGraph {
        &self.graph
    }

    pub fn kappa(&self) -> &[Vec<u32>] {
        &self.kappa
    }

    pub fn psi(&self) -> &[u32] {
        &self.psi
    }

    pub(crate) fn deco(&self) -> Deco {
        Deco {
            kappa: self.kappa.clone(),
            psi: self.psi.clone(),
        }
    }

    /// `|E(Γ)|` plus the κ/ψ degree.
    pub fn degree(&self) -> usize {
        self.graph.num_edges() + self.deco().degree()
    }

    /// Whether every vertex carries at most its dimension in κ/ψ degree.
    pub fn within_bounds(&self) -> bool {
        Frame::new(&self.graph).fits(&self.deco())
    }
}

impl std::fmt::Display for DecoratedStratum {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.graph)?;
        for (v, k) in self.kappa.iter().enumerate() {
            for a in k {
                write!(f, " κ{a}[{v}]")?;
            }
        }
        for (h, &p) in self.psi.iter().enumerate() {
            if p > 0 {
                write!(f, " ψ{h}^{p}")?;
            }
        }
        Ok(())
    }
}

fn canonicalize(graph: &StableGraph, deco: &Deco) -> DecoratedStratum {
    let n = graph.num_legs();
    let labels: Vec<(u32, &Vec<u32>)> = (0..graph.num_vertices())
        .map(|v| (graph.genera()[v], &deco.kappa[v]))
        .collect();
    let legs: Vec<(usize, u32)> = graph
        .legs()
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, deco.psi[i]))
        .collect();
    let edges: Vec<(usize, u32, usize, u32)> = graph
        .edges()
        .iter()
        .enumerate()
        .map(|(e, &(a, b))| (a, deco.psi[graph.side(e, 0)], b, deco.psi[graph.side(e, 1)]))
        .collect();
    let order = canonical_order(&labels, &legs, &edges);
    let (keys, hmap) = crate::graph::apply_order(n, &edges, &order.pos);
    let mut genera = vec![0; graph.num_vertices()];
    let mut kappa = vec![Vec::new(); graph.num_vertices()];
    for v in 0..graph.num_vertices() {
        genera[order.pos[v]] = graph.genera()[v];
        kappa[order.pos[v]] = deco.kappa[v].clone();
    }
    let legs = graph.legs().iter().map(|&v| order.pos[v]).collect();
    let new_edges = keys.iter().map(|&(a, _, b, _)| (a, b)).collect();
    let mut psi = vec![0; deco.psi.len()];
    for (h, &p) in deco.psi.iter().enumerate() {
        psi[hmap[h]] = p;
    }
    DecoratedStratum {
        graph: StableGraph::new_unchecked(genera, legs, new_edges),
        kappa,
        psi,
    }
}

/// A finite rational combination of decorated strata on `M̄_{g,n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TautClass {
    g: u32,
    n: usize,
    terms: BTreeMap<DecoratedStratum, Q>,
}

impl TautClass {
    pub fn zero(g: u32, n: usize) -> Self {
        TautClass {
            g,
            n,
            terms: BTreeMap::new(),
        }
    }

    /// The fundamental class.
    pub fn one(g: u32, n: usize) -> Result<Self> {
        let mut x = Self::zero(g, n);
        x.add_term(DecoratedStratum::plain(StableGraph::trivial(g, n))?, Q::one());
        Ok(x)
    }

    pub fn from_stratum(s: DecoratedStratum, coeff: Q) -> Self {
        let mut x = Self::zero(s.graph.genus(), s.graph.num_legs());
        x.add_term(s, coeff);
        x
    }

    /// `ψ_i^e` for the marking with index `i` (0-based).
    pub fn psi(g: u32, n: usize, i: usize, e: u32) -> Result<Self> {
        let graph = StableGraph::trivial(g, n);
        let mut d = Deco::unit(&graph);
        d.psi[i] = e;
        Ok(Self::from_stratum(
            DecoratedStratum::new(graph, d.kappa, d.psi)?,
            Q::one(),
        ))
    }

    /// `κ_a` on the smooth stratum.
    pub fn kappa(g: u32, n: usize, a: u32) -> Result<Self> {
        let graph = StableGraph::trivial(g, n);
        let mut d = Deco::unit(&graph);
        d.kappa[0].push(a);
        Ok(Self::from_stratum(
            DecoratedStratum::new(graph, d.kappa, d.psi)?,
            Q::one(),
        ))
    }

    /// `ξ_{Γ*}(1)`.
    pub fn boundary(graph: StableGraph) -> Result<Self> {
        Ok(Self::from_stratum(DecoratedStratum::plain(graph)?, Q::one()))
    }

    pub fn genus(&self) -> u32 {
        self.g
    }

    pub fn num_markings(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<DecoratedStratum, Q> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `coeff · s`; terms beyond the per-vertex degree bound vanish and
    /// are dropped, as are zero coefficients.
    pub fn add_term(&mut self, s: DecoratedStratum, coeff: Q) {
        debug_assert_eq!((s.graph.genus(), s.graph.num_legs()), (self.g, self.n));
        if coeff.is_zero() || !s.within_bounds() {
            return;
        }
        let entry = self.terms.entry(s);
        match entry {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
        }
    }

    pub(crate) fn add_deco(&mut self, graph: &StableGraph, deco: Deco, coeff: Q) {
        if coeff.is_zero() || !Frame::new(graph).fits(&deco) {
            return;
        }
        self.add_term(DecoratedStratum::from_deco(graph.clone(), deco), coeff);
    }

    pub(crate) fn add_poly(&mut self, graph: &StableGraph, poly: Poly, scale: &Q) {
        for (d, c) in poly {
            self.add_deco(graph, d, c * scale);
        }
    }

    fn check_ambient(&self, other: &TautClass, op: &'static str) -> Result<()> {
        if (self.g, self.n) != (other.g, other.n) {
            return Err(Error::AmbientMismatch {
                op,
                g1: self.g,
                n1: self.n,
                g2: other.g,
                n2: other.n,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &TautClass) -> Result<TautClass> {
        self.check_ambient(other, "add")?;
        let mut out = self.clone();
        for (s, c) in &other.terms {
            out.add_term(s.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &TautClass) -> Result<TautClass> {
        self.add(&other.neg())
    }

    pub fn add_scaled(&mut self, other: &TautClass, c: &Q) -> Result<()> {
        self.check_ambient(other, "add")?;
        for (s, x) in &other.terms {
            self.add_term(s.clone(), x * c);
        }
        Ok(())
    }

    pub fn scale(&self, c: &Q) -> TautClass {
        let mut out = Self::zero(self.g, self.n);
        if c.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(s, x)| (s.clone(), x * c)).collect();
        out
    }

    pub fn neg(&self) -> TautClass {
        self.scale(&-Q::one())
    }

    /// The homogeneous component of degree `d`.
    pub fn degree_part(&self, d: usize) -> TautClass {
        let mut out = Self::zero(self.g, self.n);
        out.terms = self
            .terms
            .iter()
            .filter(|(s, _)| s.degree() == d)
            .map(|(s, c)| (s.clone(), c.clone()))
            .collect();
        out
    }

    /// Degrees present, ascending.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.terms.keys().map(|s| s.degree()).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// The degree if the class is nonzero and homogeneous.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        match self.degrees().as_slice() {
            [d] => Some(*d),
            _ => None,
        }
    }

    /// Transports the class along a permutation of markings: marking `i`
    /// becomes marking `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<TautClass> {
        let mut seen = vec![false; self.n];
        if perm.len() != self.n || perm.iter().any(|&p| p >= self.n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::input("strata", "relabel", "not a permutation of the markings"));
        }
        let mut out = Self::zero(self.g, self.n);
        for (s, c) in &self.terms {
            let graph = s.graph.relabel_legs(perm);
            let mut deco = s.deco();
            for i in 0..self.n {
                deco.psi[perm[i]] = s.psi[i];
            }
            out.add_deco(&graph, deco, c.clone());
        }
        Ok(out)
    }
}

impl std::fmt::Display for TautClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (s, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{c} * {s}")?;
        }
        Ok(())
    }
}

/// Pushforward along `ξ_Γ` of per-vertex classes: the class at vertex `v`
/// lives on `M̄_{g(v), n(v)}` with its markings matched to the half-edges of
/// `v` in slot order (legs by marking, then edge sides by index).
pub fn compose_at_vertices(graph: &StableGraph, classes: &[TautClass]) -> Result<TautClass> {
    graph.validate("compose_at_vertices")?;
    let nv = graph.num_vertices();
    if classes.len() != nv {
        return Err(Error::input(
            "strata",
            "compose_at_vertices",
            format!("{} classes for {nv} vertices", classes.len()),
        ));
    }
    for v in 0..nv {
        let want = (graph.genera()[v], graph.valence(v));
        let got = (classes[v].g, classes[v].n);
        if want != got {
            return Err(Error::input(
                "strata",
                "compose_at_vertices",
                format!("vertex {v} needs a class on {want:?}, got {got:?}"),
            ));
        }
    }
    let mut out = TautClass::zero(graph.genus(), graph.num_legs());
    let lists: Vec<Vec<(&DecoratedStratum, &Q)>> =
        classes.iter().map(|c| c.terms.iter().collect()).collect();
    if lists.iter().any(|l| l.is_empty()) {
        return Ok(out);
    }
    let mut idx = vec![0usize; nv];
    loop {
        let inner: Vec<&StableGraph> = (0..nv).map(|v| &lists[v][idx[v]].0.graph).collect();
        let grafted = graft(graph, &inner);
        let mut deco = Deco::unit(&grafted.graph);
        let mut coeff = Q::one();
        for v in 0..nv {
            let (s, c) = lists[v][idx[v]];
            coeff *= c;
            for (w, k) in s.kappa.iter().enumerate() {
                deco.kappa[grafted.inner_vertex[v][w]].extend_from_slice(k);
            }
            for (h, &p) in s.psi.iter().enumerate() {
                deco.psi[grafted.inner_half[v][h]] += p;
            }
        }
        out.add_deco(&grafted.graph, deco, coeff);
        let mut v = 0;
        while v < nv {
            idx[v] += 1;
            if idx[v] < lists[v].len() {
                break;
            }
            idx[v] = 0;
            v += 1;
        }
        if v == nv {
            break;
        }
    }
    Ok(out)
}
