use num_traits::One;

use super::deco::Deco;
use super::TautClass;
use crate::graph::{HalfEdge, StableGraph};
use crate::{Error, Result, Q};

fn subsets_of(k: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..(1u32 << k)).map(move |m| (0..k).filter(|&i| m & (1 << i) != 0).collect())
}

/// Pushforward along the map forgetting the last marking, `M̄_{g,n+1} → M̄_{g,n}`.
pub fn forget_pushforward(x: &TautClass) -> Result<TautClass> {
    let g = x.genus();
    let total = x.num_markings();
    if total == 0 || 2 * g as usize + total - 1 <= 2 {
        return Err(Error::Unstable {
            op: "forget_pushforward",
            g,
            n: total.saturating_sub(1),
        });
    }
    let n = total - 1;
    let p = n;
    let mut out = TautClass::zero(g, n);
    for (s, c) in x.terms() {
        let graph = s.graph();
        let deco = s.deco();
        let v = graph.legs()[p];
        let val = graph.valence(v);
        if 2 * graph.genera()[v] as usize + val - 1 > 2 {
            push_stable(graph, &deco, c, v, &mut out);
        } else {
            push_contract(graph, &deco, c, v, &mut out);
        }
    }
    Ok(out)
}

/// Half-edge map when the last leg is removed.
fn drop_last_leg(graph: &StableGraph) -> (StableGraph, impl Fn(HalfEdge) -> HalfEdge) {
    let n = graph.num_legs() - 1;
    let reduced = StableGraph::new_unchecked(
        graph.genera().to_vec(),
        graph.legs()[..n].to_vec(),
        graph.edges().to_vec(),
    );
    (reduced, move |h: HalfEdge| if h < n { h } else { h - 1 })
}

fn push_stable(graph: &StableGraph, deco: &Deco, c: &Q, v: usize, out: &mut TautClass) {
    let p = graph.num_legs() - 1;
    let (reduced, map) = drop_last_leg(graph);
    let mut base = Deco::unit(&reduced);
    for (h, &e) in deco.psi.iter().enumerate() {
        if h != p {
            base.psi[map(h)] = e;
        }
    }
    base.kappa = deco.kappa.clone();
    let ks = deco.kappa[v].clone();
    let c0 = deco.psi[p];
    let kappa0 = 2 * reduced.genera()[v] as i64 - 2 + reduced.valence(v) as i64;
    for t in subsets_of(ks.len()) {
        let shifted = c0 + t.iter().map(|&i| ks[i]).sum::<u32>();
        let rest: Vec<u32> = (0..ks.len()).filter(|i| !t.contains(i)).map(|i| ks[i]).collect();
        if shifted >= 1 {
            let mut d = base.clone();
            d.kappa[v] = rest;
            let mut coeff = c.clone();
            if shifted == 1 {
                coeff *= Q::from_integer(kappa0.into());
            } else {
                d.kappa[v].push(shifted - 1);
                d.kappa[v].sort_unstable();
            }
            out.add_deco(&reduced, d, coeff);
        } else {
            // string equation
            for h in reduced.half_edges_at(v) {
                if base.psi[h] >= 1 {
                    let mut d = base.clone();
                    d.kappa[v] = rest.clone();
                    d.psi[h] -= 1;
                    out.add_deco(&reduced, d, c.clone());
                }
            }
        }
    }
}

fn push_contract(graph: &StableGraph, deco: &Deco, c: &Q, v: usize, out: &mut TautClass) {
    let p = graph.num_legs() - 1;
    let n = p;
    // a genus-0 trivalent vertex only supports the trivial decoration
    if !deco.kappa[v].is_empty() || graph.half_edges_at(v).iter().any(|&h| deco.psi[h] > 0) {
        return;
    }
    let others: Vec<HalfEdge> = graph.half_edges_at(v).into_iter().filter(|&h| h != p).collect();
    assert_eq!(others.len(), 2, "unstable vertex has three half-edges");
    let (h1, h2) = (others[0], others[1]);
    let vmap: Vec<usize> = (0..graph.num_vertices())
        .map(|w| if w < v { w } else { w.wrapping_sub(1) })
        .collect();
    let genera: Vec<u32> = (0..graph.num_vertices())
        .filter(|&w| w != v)
        .map(|w| graph.genera()[w])
        .collect();
    let mut legs: Vec<usize> = graph.legs()[..n].iter().map(|&w| vmap[w]).collect();
    let mut leg_psi: Vec<u32> = deco.psi[..n].to_vec();
    // edges not touching v, then the merged edge
    let mut edges = Vec::new();
    let mut edge_psi = Vec::new();
    for (e, &(a, b)) in graph.edges().iter().enumerate() {
        if a == v || b == v {
            continue;
        }
        edges.push((vmap[a], vmap[b]));
        edge_psi.push((deco.psi[graph.side(e, 0)], deco.psi[graph.side(e, 1)]));
    }
    match (graph.edge_of(h1), graph.edge_of(h2)) {
        (Some((e1, _)), Some((e2, _))) => {
            assert_ne!(e1, e2, "self-edge at a contracted vertex");
            let o1 = graph.involution(h1);
            let o2 = graph.involution(h2);
            edges.push((vmap[graph.vertex_of(o1)], vmap[graph.vertex_of(o2)]));
            edge_psi.push((deco.psi[o1], deco.psi[o2]));
        }
        (None, Some(_)) | (Some(_), None) => {
            let (leg, side) = if graph.is_leg(h1) { (h1, h2) } else { (h2, h1) };
            let o = graph.involution(side);
            legs[leg] = vmap[graph.vertex_of(o)];
            leg_psi[leg] = deco.psi[o];
        }
        (None, None) => unreachable!("target space is stable"),
    }
    let reduced = StableGraph::new_unchecked(genera, legs, edges);
    let mut d = Deco::unit(&reduced);
    d.psi[..n].copy_from_slice(&leg_psi);
    for (e, &(pa, pb)) in edge_psi.iter().enumerate() {
        d.psi[reduced.side(e, 0)] = pa;
        d.psi[reduced.side(e, 1)] = pb;
    }
    for w in 0..graph.num_vertices() {
        if w != v {
            d.kappa[vmap[w]] = deco.kappa[w].clone();
        }
    }
    out.add_deco(&reduced, d, c.clone());
}

/// Pullback along the map forgetting a new last marking, `M̄_{g,n+1} → M̄_{g,n}`.
pub fn forget_pullback(x: &TautClass) -> Result<TautClass> {
    let g = x.genus();
    let n = x.num_markings();
    let p = n;
    let mut out = TautClass::zero(g, n + 1);
    for (s, c) in x.terms() {
        let graph = s.graph();
        let deco = s.deco();
        let shift = |h: HalfEdge| if h < n { h } else { h + 1 };
        for v in 0..graph.num_vertices() {
            // p attached at v
            let mut legs = graph.legs().to_vec();
            legs.push(v);
            let gv = StableGraph::new_unchecked(graph.genera().to_vec(), legs, graph.edges().to_vec());
            let mut base = Deco::unit(&gv);
            for (h, &e) in deco.psi.iter().enumerate() {
                base.psi[shift(h)] = e;
            }
            base.kappa = deco.kappa.clone();
            let ks = deco.kappa[v].clone();
            for t in subsets_of(ks.len()) {
                let mut d = base.clone();
                d.kappa[v] = (0..ks.len()).filter(|i| !t.contains(i)).map(|i| ks[i]).collect();
                d.psi[p] = t.iter().map(|&i| ks[i]).sum();
                let sign = if t.len() % 2 == 0 { Q::one() } else { -Q::one() };
                out.add_deco(&gv, d, c * sign);
            }
            // boundary corrections D_{h,p} for every decorated half-edge at v
            for h in graph.half_edges_at(v) {
                let b = deco.psi[h];
                if b == 0 {
                    continue;
                }
                let (bubbled, d) = bubble(graph, &deco, h, v);
                out.add_deco(&bubbled, d, -c.clone());
            }
        }
    }
    Ok(out)
}

/// The graph with `h` and the new last marking moved to a genus-0 vertex
/// attached to `v`, with `ψ^{b−1}` at the new side at `v`.
fn bubble(graph: &StableGraph, deco: &Deco, h: HalfEdge, v: usize) -> (StableGraph, Deco) {
    let n = graph.num_legs();
    let w = graph.num_vertices();
    let mut genera = graph.genera().to_vec();
    genera.push(0);
    let mut legs = graph.legs().to_vec();
    legs.push(w);
    let mut edges = graph.edges().to_vec();
    match graph.edge_of(h) {
        None => legs[h] = w,
        Some((e, 0)) => edges[e].0 = w,
        Some((e, _)) => edges[e].1 = w,
    }
    edges.push((v, w));
    let bubbled = StableGraph::new_unchecked(genera, legs, edges);
    let shift = |x: HalfEdge| if x < n { x } else { x + 1 };
    let mut d = Deco::unit(&bubbled);
    for (x, &e) in deco.psi.iter().enumerate() {
        if x != h {
            d.psi[shift(x)] = e;
        }
    }
    let new_edge = bubbled.num_edges() - 1;
    d.psi[bubbled.side(new_edge, 0)] = deco.psi[h] - 1;
    for u in 0..graph.num_vertices() {
        d.kappa[u] = deco.kappa[u].clone();
    }
    (bubbled, d)
}

/// Pullback adding new markings at the given final positions; the old
/// markings keep their relative order.
pub fn forget_pullback_many(x: &TautClass, positions: &[usize]) -> Result<TautClass> {
    let n = x.num_markings();
    let total = n + positions.len();
    let mut sorted = positions.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != positions.len() || sorted.last().is_some_and(|&p| p >= total) {
        return Err(Error::input(
            "strata",
            "forget_pullback",
            "positions must be distinct and within range",
        ));
    }
    let mut y = x.clone();
    for _ in positions {
        y = forget_pullback(&y)?;
    }
    let old: Vec<usize> = (0..total).filter(|i| !positions.contains(i)).collect();
    let mut perm = vec![0; total];
    for (j, &pos) in old.iter().enumerate() {
        perm[j] = pos;
    }
    for (t, &pos) in positions.iter().enumerate() {
        perm[n + t] = pos;
    }
    if perm.iter().enumerate().all(|(i, &p)| i == p) {
        return Ok(y);
    }
    y.relabel(&perm)
}
