//! Top intersection numbers of ψ- and κ-classes, evaluation of top-degree
//! classes, pairings against the decorated generators, and equality
//! certificates up to the pairing kernel.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, OnceLock};

use num_traits::{One, Zero};
use parking_lot::Mutex;
use rayon::prelude::*;

use crate::graph::{stable_graphs_cached, StableGraph};
use crate::strata::{product_by_graph, DecoratedStratum, Deco, Frame, TautClass};
use crate::{q_frac, q_int, Error, Result, Q};

type PsiKey = (u32, Vec<u32>);

fn psi_cache() -> &'static Mutex<HashMap<PsiKey, Q>> {
    static CACHE: OnceLock<Mutex<HashMap<PsiKey, Q>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn double_factorial(k: i64) -> Q {
    // (2j − 1)!! for odd k = 2j − 1 ≥ −1
    let mut acc = num_bigint::BigInt::one();
    let mut x = k;
    while x > 1 {
        acc *= x;
        x -= 2;
    }
    Q::from_integer(acc)
}

/// `⟨τ_{a_1} ⋯ τ_{a_n}⟩_g`; zero outside the stable range or off the dimension.
fn psi_raw(g: u32, mut a: Vec<u32>) -> Q {
    let n = a.len();
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Q::zero();
    }
    let sum: i64 = a.iter().map(|&x| x as i64).sum();
    if sum != 3 * g as i64 - 3 + n as i64 {
        return Q::zero();
    }
    a.sort_unstable_by(|x, y| y.cmp(x));
    if g == 0 && n == 3 {
        return Q::one();
    }
    if g == 1 && n == 1 {
        return q_frac(1, 24);
    }
    let key = (g, a.clone());
    if let Some(v) = psi_cache().lock().get(&key) {
        return v.clone();
    }
    let value = psi_recursion(g, &a);
    psi_cache().lock().entry(key).or_insert(value).clone()
}

fn psi_recursion(g: u32, a: &[u32]) -> Q {
    let n = a.len();
    if let Some(pos) = a.iter().position(|&x| x == 0) {
        // string equation
        let mut rest = a.to_vec();
        rest.remove(pos);
        let mut total = Q::zero();
        for j in 0..rest.len() {
            if rest[j] > 0 {
                let mut b = rest.clone();
                b[j] -= 1;
                total += psi_raw(g, b);
            }
        }
        return total;
    }
    if let Some(pos) = a.iter().position(|&x| x == 1) {
        // dilaton equation
        let mut rest = a.to_vec();
        rest.remove(pos);
        return q_int(2 * g as i64 - 2 + n as i64 - 1) * psi_raw(g, rest);
    }
    // Dijkgraaf–Verlinde–Verlinde recursion on the first exponent
    let k = a[0] as i64 - 1;
    let s: Vec<u32> = a[1..].to_vec();
    let mut total = Q::zero();
    for j in 0..s.len() {
        let aj = s[j] as i64;
        let mut b = s.clone();
        b.remove(j);
        b.push((k + aj) as u32);
        total += double_factorial(2 * k + 2 * aj + 1) / double_factorial(2 * aj - 1) * psi_raw(g, b);
    }
    let half = q_frac(1, 2);
    for r in 0..k {
        let t = k - 1 - r;
        let w = double_factorial(2 * r + 1) * double_factorial(2 * t + 1);
        if g >= 1 {
            let mut b = s.clone();
            b.push(r as u32);
            b.push(t as u32);
            total += &half * &w * psi_raw(g - 1, b);
        }
        let m = s.len();
        for mask in 0u32..(1u32 << m) {
            let left: Vec<u32> = (0..m).filter(|i| mask & (1 << i) != 0).map(|i| s[i]).collect();
            let right: Vec<u32> = (0..m).filter(|i| mask & (1 << i) == 0).map(|i| s[i]).collect();
            for g1 in 0..=g {
                let mut l = left.clone();
                l.push(r as u32);
                let mut rr = right.clone();
                rr.push(t as u32);
                let x = psi_raw(g1, l);
                if x.is_zero() {
                    continue;
                }
                total += &half * &w * x * psi_raw(g - g1, rr);
            }
        }
    }
    total / double_factorial(2 * k + 3)
}

fn check_top(op: &'static str, g: u32, n: usize, degree: usize) -> Result<()> {
    if 2 * g as usize + n <= 2 {
        return Err(Error::Unstable { op, g, n });
    }
    let dim = 3 * g as usize + n - 3;
    if degree != dim {
        return Err(Error::DegreeMismatch {
            module: "intersect",
            op,
            expected: dim,
            found: degree.to_string(),
        });
    }
    Ok(())
}

/// `∫_{M̄_{g,n}} ψ_1^{a_1} ⋯ ψ_n^{a_n}`.
pub fn psi_integral(g: u32, exponents: &[u32]) -> Result<Q> {
    let degree = exponents.iter().map(|&x| x as usize).sum();
    check_top("psi_integral", g, exponents.len(), degree)?;
    Ok(psi_raw(g, exponents.to_vec()))
}

type KappaKey = (u32, Vec<u32>, Vec<u32>);

fn kappa_cache() -> &'static Mutex<HashMap<KappaKey, Q>> {
    static CACHE: OnceLock<Mutex<HashMap<KappaKey, Q>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// κ-classes with indices ≥ 1, removed one at a time by adding a marking:
/// `∫ ψ^d κ_{b_1}⋯κ_{b_m} = ∫_{M̄_{g,n+1}} ψ^d ψ_{n+1}^{b_m+1} ∏_{j<m} (κ_{b_j} − ψ_{n+1}^{b_j})`.
fn kappa_raw(g: u32, mut kappa: Vec<u32>, mut psi: Vec<u32>) -> Q {
    if kappa.is_empty() {
        return psi_raw(g, psi);
    }
    kappa.sort_unstable();
    psi.sort_unstable();
    let key = (g, kappa.clone(), psi.clone());
    if let Some(v) = kappa_cache().lock().get(&key) {
        return v.clone();
    }
    let last = kappa.pop().unwrap();
    let m = kappa.len();
    let mut total = Q::zero();
    for mask in 0u32..(1u32 << m) {
        let taken: u32 = (0..m).filter(|i| mask & (1 << i) != 0).map(|i| kappa[i]).sum();
        let rest: Vec<u32> = (0..m).filter(|i| mask & (1 << i) == 0).map(|i| kappa[i]).collect();
        let mut p = psi.clone();
        p.push(last + 1 + taken);
        let v = kappa_raw(g, rest, p);
        if mask.count_ones() % 2 == 0 {
            total += v;
        } else {
            total -= v;
        }
    }
    kappa_cache().lock().entry(key).or_insert(total).clone()
}

/// `∫_{M̄_{g,n}} κ_{b_1}⋯κ_{b_m} ψ_1^{a_1}⋯ψ_n^{a_n}`. A κ_0 factor is the
/// scalar `2g − 2 + n`.
pub fn kappa_psi_integral(g: u32, n: usize, kappa: &[u32], psi: &[u32]) -> Result<Q> {
    if psi.len() != n {
        return Err(Error::input(
            "intersect",
            "kappa_psi_integral",
            format!("{} ψ exponents for {n} markings", psi.len()),
        ));
    }
    let degree = kappa.iter().chain(psi).map(|&x| x as usize).sum();
    check_top("kappa_psi_integral", g, n, degree)?;
    let zeros = kappa.iter().filter(|&&a| a == 0).count();
    let rest: Vec<u32> = kappa.iter().copied().filter(|&a| a > 0).collect();
    let scalar = q_int(2 * g as i64 - 2 + n as i64);
    let mut value = kappa_raw(g, rest, psi.to_vec());
    for _ in 0..zeros {
        value *= &scalar;
    }
    Ok(value)
}

/// Integral of a decoration over `M̄_Γ = ∏_v M̄_{g(v), n(v)}`; zero unless
/// every vertex carries exactly its dimension.
pub(crate) fn integrate_deco(graph: &StableGraph, frame: &Frame, deco: &Deco) -> Q {
    if !frame.is_top(deco) {
        return Q::zero();
    }
    let mut psi_at: Vec<Vec<u32>> = vec![Vec::new(); graph.num_vertices()];
    for (h, &p) in deco.psi.iter().enumerate() {
        psi_at[frame.hv[h]].push(p);
    }
    let mut value = Q::one();
    for v in 0..graph.num_vertices() {
        let x = kappa_raw(graph.genera()[v], deco.kappa[v].clone(), psi_at[v].clone());
        if x.is_zero() {
            return x;
        }
        value *= x;
    }
    value
}

/// Integral of a class homogeneous of top degree `3g − 3 + n`.
pub fn evaluate(x: &TautClass) -> Result<Q> {
    let dim = 3 * x.genus() as usize + x.num_markings() - 3;
    let mut total = Q::zero();
    for (s, c) in x.terms() {
        if s.degree() != dim {
            return Err(Error::DegreeMismatch {
                module: "intersect",
                op: "evaluate",
                expected: dim,
                found: s.degree().to_string(),
            });
        }
        let frame = Frame::new(s.graph());
        total += c * integrate_deco(s.graph(), &frame, &s.deco());
    }
    Ok(total)
}

fn partitions(total: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if total == 0 {
        out.push(prefix.clone());
        return;
    }
    for a in (1..=total.min(max)).rev() {
        prefix.push(a);
        partitions(total - a, a, prefix, out);
        prefix.pop();
    }
}

fn distributions(total: u32, slots: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if slots == 0 {
        if total == 0 {
            out.push(prefix.clone());
        }
        return;
    }
    for x in 0..=total {
        prefix.push(x);
        distributions(total - x, slots - 1, prefix, out);
        prefix.pop();
    }
}

type GenKey = (u32, usize, usize);

fn generator_cache() -> &'static Mutex<HashMap<GenKey, Arc<Vec<DecoratedStratum>>>> {
    static CACHE: OnceLock<Mutex<HashMap<GenKey, Arc<Vec<DecoratedStratum>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Every decorated generator `[Γ, γ]` of degree `d` on `M̄_{g,n}` within the
/// per-vertex degree bounds, one per canonical form, sorted.
pub fn generators(g: u32, n: usize, d: usize) -> Result<Arc<Vec<DecoratedStratum>>> {
    let key = (g, n, d);
    if let Some(hit) = generator_cache().lock().get(&key) {
        return Ok(hit.clone());
    }
    let mut found: BTreeSet<DecoratedStratum> = BTreeSet::new();
    for graph in stable_graphs_cached(g, n)?.iter() {
        if graph.num_edges() > d {
            continue;
        }
        let rest = (d - graph.num_edges()) as u32;
        let nv = graph.num_vertices();
        let dims: Vec<u32> = (0..nv).map(|v| graph.vertex_dim(v) as u32).collect();
        let mut per_vertex: Vec<Vec<u32>> = Vec::new();
        distributions(rest, nv, &mut Vec::new(), &mut per_vertex);
        for split in per_vertex {
            if split.iter().zip(&dims).any(|(a, b)| a > b) {
                continue;
            }
            // decorations of each vertex with exactly its share of the degree
            let mut options: Vec<Vec<(Vec<u32>, Vec<u32>)>> = Vec::with_capacity(nv);
            for v in 0..nv {
                let hs = graph.half_edges_at(v);
                let mut opts = Vec::new();
                for kdeg in 0..=split[v] {
                    let mut parts = Vec::new();
                    partitions(kdeg, kdeg, &mut Vec::new(), &mut parts);
                    let mut psis = Vec::new();
                    distributions(split[v] - kdeg, hs.len(), &mut Vec::new(), &mut psis);
                    for p in &parts {
                        for q in &psis {
                            let mut k = p.clone();
                            k.sort_unstable();
                            opts.push((k, q.clone()));
                        }
                    }
                }
                options.push(opts);
            }
            let mut idx = vec![0usize; nv];
            loop {
                let mut deco = Deco {
                    kappa: vec![Vec::new(); nv],
                    psi: vec![0; graph.num_half_edges()],
                };
                for v in 0..nv {
                    let (k, q) = &options[v][idx[v]];
                    deco.kappa[v] = k.clone();
                    for (j, h) in graph.half_edges_at(v).into_iter().enumerate() {
                        deco.psi[h] = q[j];
                    }
                }
                found.insert(DecoratedStratum::from_deco(graph.clone(), deco));
                let mut v = 0;
                while v < nv {
                    idx[v] += 1;
                    if idx[v] < options[v].len() {
                        break;
                    }
                    idx[v] = 0;
                    v += 1;
                }
                if v == nv {
                    break;
                }
            }
        }
    }
    let list = Arc::new(found.into_iter().collect::<Vec<_>>());
    Ok(generator_cache().lock().entry(key).or_insert(list).clone())
}

/// `∫ X · Y` for classes of complementary degrees.
pub fn pair(x: &TautClass, y: &TautClass) -> Result<Q> {
    check_same(x, y, "pair")?;
    let dim = 3 * x.genus() as usize + x.num_markings() - 3;
    if let (Some(dx), Some(dy)) = (x.homogeneous_degree(), y.homogeneous_degree()) {
        if dx + dy != dim {
            return Err(Error::DegreeMismatch {
                module: "intersect",
                op: "pair",
                expected: dim,
                found: format!("{dx} + {dy}"),
            });
        }
    }
    let gx = crate::strata::group_by_graph(x);
    let gy = crate::strata::group_by_graph(y);
    let mut total = Q::zero();
    for a in &gx {
        for b in &gy {
            total += pair_groups(a, b);
        }
    }
    Ok(total)
}

fn pair_groups(a: &crate::strata::Group, b: &crate::strata::Group) -> Q {
    let mut total = Q::zero();
    product_by_graph(a, b, |s, poly, c| {
        for (d, k) in poly {
            let v = integrate_deco(&s.graph, &s.frame, &d);
            if !v.is_zero() {
                total += &c * k * v;
            }
        }
    });
    total
}

fn check_same(x: &TautClass, y: &TautClass, op: &'static str) -> Result<()> {
    if (x.genus(), x.num_markings()) != (y.genus(), y.num_markings()) {
        return Err(Error::AmbientMismatch {
            op,
            g1: x.genus(),
            n1: x.num_markings(),
            g2: y.genus(),
            n2: y.num_markings(),
        });
    }
    Ok(())
}

/// `∫ X · B` for every generator `B` in the list.
pub fn pairing_vector(x: &TautClass, gens: &[DecoratedStratum]) -> Vec<Q> {
    let gx = crate::strata::group_by_graph(x);
    gens.par_iter()
        .map(|b| {
            let gb = (b.graph().clone(), vec![(b.deco(), Q::one())]);
            let mut total = Q::zero();
            for a in &gx {
                total += pair_groups(a, &gb);
            }
            total
        })
        .collect()
}

/// Outcome of comparing two classes through all pairings.
#[derive(Clone, Debug, PartialEq)]
pub enum PairingVerdict {
    /// Every pairing against the spanning generators agrees. This certifies
    /// equality only modulo the kernel of the pairing.
    EqualUnderPairing { generators: usize },
    /// A generator on which the pairings differ: a proof of inequality.
    Distinct {
        witness: DecoratedStratum,
        left: Q,
        right: Q,
    },
}

impl PairingVerdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, PairingVerdict::EqualUnderPairing { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            PairingVerdict::EqualUnderPairing { .. } => "EQUAL-UNDER-PAIRING",
            PairingVerdict::Distinct { .. } => "DISTINCT",
        }
    }
}

/// All pairings of two degree-`d` classes with the generators of degree
/// `3g − 3 + n − d`, and the verdict.
#[derive(Clone, Debug)]
pub struct PairingReport {
    pub degree: usize,
    pub generators: Vec<DecoratedStratum>,
    pub left: Vec<Q>,
    pub right: Vec<Q>,
    pub verdict: PairingVerdict,
}

fn check_degree(x: &TautClass, d: usize, op: &'static str) -> Result<()> {
    match x.degrees().as_slice() {
        [] => Ok(()),
        [e] if *e == d => Ok(()),
        other => Err(Error::DegreeMismatch {
            module: "intersect",
            op,
            expected: d,
            found: format!("{other:?}"),
        }),
    }
}

pub fn compare_by_pairing(x: &TautClass, y: &TautClass, d: usize) -> Result<PairingReport> {
    check_same(x, y, "equals_pairing")?;
    check_degree(x, d, "equals_pairing")?;
    check_degree(y, d, "equals_pairing")?;
    let dim = 3 * x.genus() as usize + x.num_markings() - 3;
    if d > dim {
        return Err(Error::DegreeMismatch {
            module: "intersect",
            op: "equals_pairing",
            expected: dim,
            found: d.to_string(),
        });
    }
    let gens = generators(x.genus(), x.num_markings(), dim - d)?;
    let left = pairing_vector(x, &gens);
    let right = pairing_vector(y, &gens);
    let verdict = match (0..gens.len()).find(|&i| left[i] != right[i]) {
        None => PairingVerdict::EqualUnderPairing {
            generators: gens.len(),
        },
        Some(i) => PairingVerdict::Distinct {
            witness: gens[i].clone(),
            left: left[i].clone(),
            right: right[i].clone(),
        },
    };
    Ok(PairingReport {
        degree: d,
        generators: gens.as_ref().clone(),
        left,
        right,
        verdict,
    })
}

/// Compares two classes of degree `d` through their pairings with every
/// generator of complementary degree.
pub fn equals_pairing(x: &TautClass, y: &TautClass, d: usize) -> Result<PairingVerdict> {
    Ok(compare_by_pairing(x, y, d)?.verdict)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_values() {
        assert_eq!(psi_integral(0, &[0, 0, 0]).unwrap(), q_int(1));
        assert_eq!(psi_integral(1, &[1]).unwrap(), q_frac(1, 24));
        assert_eq!(psi_integral(0, &[1, 0, 0, 0]).unwrap(), q_int(1));
        assert!(psi_integral(1, &[2]).is_err());
    }

    #[test]
    fn kappa_values() {
        assert_eq!(kappa_psi_integral(1, 1, &[1], &[0]).unwrap(), q_frac(1, 24));
        assert_eq!(kappa_psi_integral(0, 4, &[1], &[0, 0, 0, 0]).unwrap(), q_int(1));
        assert_eq!(
            kappa_psi_integral(0, 4, &[0], &[1, 0, 0, 0]).unwrap(),
            q_int(2)
        );
    }

    #[test]
    fn generator_counts_small() {
        // M̄_{0,4}, degree 1: ψ_1..ψ_4, κ_1 and three boundary divisors
        assert_eq!(generators(0, 4, 1).unwrap().len(), 8);
        assert_eq!(generators(0, 4, 0).unwrap().len(), 1);
    }
}

#[cfg(test)]
mod relation_tests {
    use super::*;

    #[test]
    fn psi_on_m12_as_boundary() {
        // ψ_1 = (1/24) ξ_*[loop] + δ_{0,{1,2}} on M̄_{1,2}
        let psi = TautClass::psi(1, 2, 0, 1).unwrap();
        let lp = StableGraph::new(vec![0], vec![0, 0], vec![(0, 0)]).unwrap();
        let rat = StableGraph::new(vec![1, 0], vec![1, 1], vec![(0, 1)]).unwrap();
        let mut rhs = TautClass::boundary(lp).unwrap().scale(&q_frac(1, 24));
        rhs.add_scaled(&TautClass::boundary(rat).unwrap(), &Q::one()).unwrap();
        assert!(equals_pairing(&psi, &rhs, 1).unwrap().is_equal());
        let wrong = rhs.scale(&q_int(2));
        assert!(!equals_pairing(&psi, &wrong, 1).unwrap().is_equal());
        assert_eq!(pair(&psi, &psi).unwrap(), q_frac(1, 24));
        assert_eq!(pair(&rhs, &rhs).unwrap(), q_frac(1, 24));
    }
}
