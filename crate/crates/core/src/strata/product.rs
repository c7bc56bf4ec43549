use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock};

use num_traits::{One, Zero};
use parking_lot::Mutex;
use rayon::prelude::*;

use super::deco::{kappa_sum, poly_mul, psi_linear, Deco, Frame, Poly};
use super::graft::graft;
use super::TautClass;
use crate::graph::{isomorphisms, stable_graphs_cached, HalfEdge, StableGraph};
use crate::{Result, Q};

/// A generic `(A, B)`-structure: a graph `Γ` with contractions onto `A` and
/// onto `B` such that every edge of `Γ` comes from `A` or from `B`.
pub(crate) struct Structure {
    pub graph: StableGraph,
    pub frame: Frame,
    pub weight: Q,
    pub a_vertex: Vec<Vec<usize>>,
    pub a_half: Vec<HalfEdge>,
    pub b_vertex: Vec<Vec<usize>>,
    pub b_half: Vec<HalfEdge>,
    /// Sides of the edges common to `A` and `B`.
    pub excess: Vec<(HalfEdge, HalfEdge)>,
}

type Key = (StableGraph, StableGraph);

fn cache() -> &'static Mutex<HashMap<Key, Arc<Vec<Structure>>>> {
    static CACHE: OnceLock<Mutex<HashMap<Key, Arc<Vec<Structure>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// All generic structures for a pair of graphs, memoized.
pub(crate) fn structures(a: &StableGraph, b: &StableGraph) -> Arc<Vec<Structure>> {
    let key = (a.clone(), b.clone());
    if let Some(hit) = cache().lock().get(&key) {
        return hit.clone();
    }
    let computed = Arc::new(compute_structures(a, b));
    cache().lock().entry(key).or_insert(computed).clone()
}

fn compute_structures(a: &StableGraph, b: &StableGraph) -> Vec<Structure> {
    let ea = a.num_edges();
    let eb = b.num_edges();
    let dim = a.ambient_dim();
    let budget = eb.min(dim.saturating_sub(ea));
    let nv = a.num_vertices();
    let choices: Vec<Vec<StableGraph>> = (0..nv)
        .map(|v| {
            stable_graphs_cached(a.genera()[v], a.valence(v))
                .expect("stable vertex")
                .iter()
                .filter(|g| g.num_edges() <= budget)
                .cloned()
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; nv];
    loop {
        let inner: Vec<&StableGraph> = (0..nv).map(|v| &choices[v][idx[v]]).collect();
        let new: usize = inner.iter().map(|g| g.num_edges()).sum();
        if new <= budget && eb - new <= ea {
            structures_over(a, b, &inner, eb - new, &mut out);
        }
        let mut v = 0;
        while v < nv {
            idx[v] += 1;
            if idx[v] < choices[v].len() {
                break;
            }
            idx[v] = 0;
            v += 1;
        }
        if v == nv {
            break;
        }
    }
    out
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn structures_over(
    a: &StableGraph,
    b: &StableGraph,
    inner: &[&StableGraph],
    old_in_b: usize,
    out: &mut Vec<Structure>,
) {
    let grafted = graft(a, inner);
    let gamma = &grafted.graph;
    let ea = a.num_edges();
    let aut: usize = inner.iter().map(|g| g.automorphism_order()).product();
    let weight = Q::new(1.into(), (aut as i64).into());
    for chosen in subsets(ea, old_in_b) {
        // edges kept in B: the chosen old edges and all new ones
        let mut keep = vec![false; gamma.num_edges()];
        for &e in &chosen {
            keep[e] = true;
        }
        for &e in &grafted.new_edges {
            keep[e] = true;
        }
        let contract: Vec<bool> = keep.iter().map(|k| !k).collect();
        let (c, vmap, emap) = gamma.contract(&contract);
        if c.num_vertices() != b.num_vertices() {
            continue;
        }
        let isos = isomorphisms(&c, b);
        if isos.is_empty() {
            continue;
        }
        let mut gamma_edge = vec![0usize; c.num_edges()];
        for (e, m) in emap.iter().enumerate() {
            if let Some(ce) = m {
                gamma_edge[*ce] = e;
            }
        }
        let excess: Vec<(HalfEdge, HalfEdge)> = chosen
            .iter()
            .map(|&e| (gamma.side(e, 0), gamma.side(e, 1)))
            .collect();
        for iso in isos {
            let mut b_half = vec![0; b.num_half_edges()];
            for hc in 0..c.num_half_edges() {
                let hb = iso.half_edge[hc];
                b_half[hb] = match c.edge_of(hc) {
                    None => hc,
                    Some((ce, s)) => gamma.side(gamma_edge[ce], s),
                };
            }
            let mut b_vertex = vec![Vec::new(); b.num_vertices()];
            for w in 0..gamma.num_vertices() {
                b_vertex[iso.vertex[vmap[w]]].push(w);
            }
            out.push(Structure {
                graph: gamma.clone(),
                frame: super::deco::Frame::new(gamma),
                weight: weight.clone(),
                a_vertex: grafted.inner_vertex.clone(),
                a_half: grafted.base_half.clone(),
                b_vertex,
                b_half,
                excess: excess.clone(),
            });
        }
    }
}

/// The product of pulled-back decorations and the excess factors on `Γ`.
pub(crate) fn structure_product(s: &Structure, alpha: &Deco, beta: &Deco) -> Poly {
    let graph = &s.graph;
    let mut mono = Deco::unit(graph);
    for (h, &p) in alpha.psi.iter().enumerate() {
        mono.psi[s.a_half[h]] += p;
    }
    for (h, &p) in beta.psi.iter().enumerate() {
        mono.psi[s.b_half[h]] += p;
    }
    if !s.frame.fits(&mono) {
        return Poly::new();
    }
    let mut poly = Poly::new();
    poly.insert(mono, Q::one());
    for (v, ks) in alpha.kappa.iter().enumerate() {
        for &k in ks {
            poly = poly_mul(&poly, &kappa_sum(graph, &s.a_vertex[v], k), &s.frame);
        }
    }
    for (v, ks) in beta.kappa.iter().enumerate() {
        for &k in ks {
            poly = poly_mul(&poly, &kappa_sum(graph, &s.b_vertex[v], k), &s.frame);
        }
    }
    for &(h, h2) in &s.excess {
        let factor = psi_linear(graph, &[(h, -Q::one()), (h2, -Q::one())]);
        poly = poly_mul(&poly, &factor, &s.frame);
        if poly.is_empty() {
            break;
        }
    }
    poly
}

pub(crate) type Group = (StableGraph, Vec<(Deco, Q)>);

pub(crate) fn group_by_graph(x: &TautClass) -> Vec<Group> {
    let mut groups: BTreeMap<&StableGraph, Vec<(Deco, Q)>> = BTreeMap::new();
    for (s, c) in x.terms() {
        groups.entry(s.graph()).or_default().push((s.deco(), c.clone()));
    }
    groups.into_iter().map(|(g, v)| (g.clone(), v)).collect()
}

/// Calls `f(structure, polynomial, coefficient)` for every product term of
/// two graph groups, skipping pairs whose degrees exceed the ambient dimension.
pub(crate) fn product_by_graph(
    ga: &Group,
    gb: &Group,
    mut f: impl FnMut(&Structure, Poly, Q),
) {
    let dim = ga.0.ambient_dim();
    let pairs: Vec<(&(Deco, Q), &(Deco, Q))> = ga
        .1
        .iter()
        .flat_map(|x| gb.1.iter().map(move |y| (x, y)))
        .filter(|(x, y)| ga.0.num_edges() + x.0.degree() + gb.0.num_edges() + y.0.degree() <= dim)
        .collect();
    if pairs.is_empty() {
        return;
    }
    let structs = structures(&ga.0, &gb.0);
    for s in structs.iter() {
        for (x, y) in &pairs {
            let poly = structure_product(s, &x.0, &y.0);
            if !poly.is_empty() {
                f(s, poly, &x.1 * &y.1 * &s.weight);
            }
        }
    }
}

/// The intersection product in the strata algebra, expanded over generic
/// structures with excess factor `−ψ_h − ψ_{h'}` on every common edge.
pub fn multiply(x: &TautClass, y: &TautClass) -> Result<TautClass> {
    if (x.genus(), x.num_markings()) != (y.genus(), y.num_markings()) {
        return Err(crate::Error::AmbientMismatch {
            op: "multiply",
            g1: x.genus(),
            n1: x.num_markings(),
            g2: y.genus(),
            n2: y.num_markings(),
        });
    }
    let gx = group_by_graph(x);
    let gy = group_by_graph(y);
    let pairs: Vec<(&Group, &Group)> = gx.iter().flat_map(|a| gy.iter().map(move |b| (a, b))).collect();
    let parts: Vec<TautClass> = pairs
        .par_iter()
        .map(|(a, b)| {
            let mut out = TautClass::zero(x.genus(), x.num_markings());
            product_by_graph(a, b, |s, poly, c| {
                for (d, k) in poly {
                    if !k.is_zero() {
                        out.add_deco(&s.graph, d, k * &c);
                    }
                }
            });
            out
        })
        .collect();
    let mut total = TautClass::zero(x.genus(), x.num_markings());
    for p in parts {
        total.add_scaled(&p, &Q::one())?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disjoint_boundary_divisors() {
        let d1 = StableGraph::new(vec![0, 0], vec![0, 0, 1, 1], vec![(0, 1)]).unwrap();
        let d2 = StableGraph::new(vec![0, 0], vec![0, 1, 0, 1], vec![(0, 1)]).unwrap();
        let x = TautClass::boundary(d1).unwrap();
        let y = TautClass::boundary(d2).unwrap();
        assert!(multiply(&x, &y).unwrap().is_zero());
    }

    #[test]
    fn unit_times_loop() {
        let lp = StableGraph::new(vec![0], vec![0], vec![(0, 0)]).unwrap();
        let x = TautClass::boundary(lp).unwrap();
        let one = TautClass::one(1, 1).unwrap();
        assert_eq!(multiply(&one, &x).unwrap(), x);
        assert_eq!(multiply(&x, &one).unwrap(), x);
    }
}
