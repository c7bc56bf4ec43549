//! Admissible weightings mod `r` and Pixton's cycle `P^d_{g,μ}`.
//!
//! The vertex factor is `exp(−k²κ_1[v])`, leg weights are `m_i + k` and vertex
//! sums are `k(2g(v) − 2 + n(v))`. With `k = 1` this is the cycle attached to
//! canonical divisors; `k = 0` gives the double ramification formula.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use parking_lot::Mutex;
use rayon::prelude::*;

use crate::graph::{stable_graphs_cached, StableGraph};
use crate::strata::{poly_mul, psi_linear, DecoratedStratum, Deco, Frame, Poly, TautClass};
use crate::{q_frac, q_int, Error, Result, Q};

/// Interpolation settings.
#[derive(Clone, Debug)]
pub struct PixtonOptions {
    /// Largest number of interpolation nodes tried before giving up.
    pub max_samples: usize,
}

impl Default for PixtonOptions {
    fn default() -> Self {
        PixtonOptions { max_samples: 64 }
    }
}

fn check_input(g: u32, mu: &[i64], k: i64, op: &'static str) -> Result<()> {
    let n = mu.len();
    if 2 * g as usize + n <= 2 {
        return Err(Error::Unstable { op, g, n });
    }
    let sum: i64 = mu.iter().sum();
    if sum != k * (2 * g as i64 - 2) {
        return Err(Error::input(
            "pixton",
            op,
            format!("parts sum to {sum}, expected {}", k * (2 * g as i64 - 2)),
        ));
    }
    Ok(())
}

/// Leg weights `m_i + k`.
pub fn shifted(mu: &[i64], k: i64) -> Vec<i64> {
    mu.iter().map(|m| m + k).collect()
}

/// Weightings mod `r` for the canonical case `k = 1`.
pub fn admissible_weightings(graph: &StableGraph, mu: &[i64], r: u64) -> Result<Vec<Vec<u64>>> {
    admissible_weightings_k(graph, &shifted(mu, 1), 1, r)
}

/// All `w : H(Γ) → {0, …, r−1}` with legs `≡ a_i`, `w(h) + w(h') ≡ 0` on
/// edges and vertex sums `≡ k(2g(v) − 2 + n(v))`. Solved on a spanning tree
/// with the `h¹` remaining edges free.
pub fn admissible_weightings_k(
    graph: &StableGraph,
    a: &[i64],
    k: i64,
    r: u64,
) -> Result<Vec<Vec<u64>>> {
    if r == 0 {
        return Err(Error::input("pixton", "admissible_weightings", "r must be positive"));
    }
    if a.len() != graph.num_legs() {
        return Err(Error::input(
            "pixton",
            "admissible_weightings",
            format!("{} leg weights for {} legs", a.len(), graph.num_legs()),
        ));
    }
    let ri = r as i64;
    let md = |x: i64| x.rem_euclid(ri) as u64;
    let nv = graph.num_vertices();
    // BFS spanning tree from vertex 0
    let mut parent_edge: Vec<Option<(usize, usize)>> = vec![None; nv];
    let mut seen = vec![false; nv];
    let mut order = vec![0usize];
    seen[0] = true;
    let mut tree = vec![false; graph.num_edges()];
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        i += 1;
        for (e, &(x, y)) in graph.edges().iter().enumerate() {
            for (s, (p, q)) in [(0usize, (x, y)), (1, (y, x))] {
                if p == v && !seen[q] {
                    seen[q] = true;
                    tree[e] = true;
                    // side of e at the child q
                    parent_edge[q] = Some((e, 1 - s));
                    order.push(q);
                }
            }
        }
    }
    let targets: Vec<i64> = (0..nv)
        .map(|v| k * (2 * graph.genera()[v] as i64 - 2 + graph.valence(v) as i64))
        .collect();
    let free: Vec<usize> = (0..graph.num_edges()).filter(|&e| !tree[e]).collect();
    let count = (r as u128).pow(free.len() as u32);
    let mut out = Vec::with_capacity(count.min(1 << 20) as usize);
    let mut params = vec![0u64; free.len()];
    loop {
        let mut w = vec![0u64; graph.num_half_edges()];
        for (i, &ai) in a.iter().enumerate() {
            w[i] = md(ai);
        }
        for (j, &e) in free.iter().enumerate() {
            w[graph.side(e, 0)] = params[j];
            w[graph.side(e, 1)] = md(-(params[j] as i64));
        }
        let mut consistent = true;
        for &v in order.iter().rev() {
            let Some((e, s)) = parent_edge[v] else {
                let total: i64 = graph.half_edges_at(v).iter().map(|&h| w[h] as i64).sum();
                consistent = md(total - targets[v]) == 0;
                continue;
            };
            let mine = graph.side(e, s);
            let rest: i64 = graph
                .half_edges_at(v)
                .iter()
                .filter(|&&h| h != mine)
                .map(|&h| w[h] as i64)
                .sum();
            w[mine] = md(targets[v] - rest);
            w[graph.side(e, 1 - s)] = md(-(w[mine] as i64));
        }
        if consistent {
            out.push(w);
        }
        let mut j = 0;
        while j < params.len() {
            params[j] += 1;
            if params[j] < r {
                break;
            }
            params[j] = 0;
            j += 1;
        }
        if j == params.len() {
            break;
        }
    }
    Ok(out)
}

/// The `r`-independent part of the formula: for a graph and a vector of edge
/// exponents `m_e ≥ 1`, the class `Dec_{Γ,m} / |Aut Γ|` whose coefficient
/// at level `r` is `Σ_w ∏_e (w(h)w(h'))^{m_e} / r^{h¹}`.
struct Piece {
    graph: StableGraph,
    exponents: Vec<u32>,
    class: TautClass,
}

type PieceKey = (u32, Vec<i64>, i64, usize);

fn piece_cache() -> &'static Mutex<HashMap<PieceKey, Arc<Vec<Piece>>>> {
    static CACHE: OnceLock<Mutex<HashMap<PieceKey, Arc<Vec<Piece>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn factorial(m: u32) -> BigInt {
    (1..=m).fold(BigInt::one(), |acc, x| acc * x)
}

fn exponent_vectors(edges: usize, budget: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if prefix.len() == edges {
        out.push(prefix.clone());
        return;
    }
    let used: usize = prefix.iter().map(|&m| m as usize).sum();
    let left = edges - prefix.len() - 1;
    for m in 1..=(budget - used - left) {
        prefix.push(m as u32);
        exponent_vectors(edges, budget, prefix, out);
        prefix.pop();
    }
}

/// Degree-`D` part of `∏_v exp(−k²κ_1[v]) ∏_i exp(a_i²ψ_i)`.
fn exp_part(graph: &StableGraph, frame: &Frame, a: &[i64], k: i64, degree: usize) -> Poly {
    let nv = graph.num_vertices();
    let vars = nv + a.len();
    let coeff: Vec<Q> = (0..vars)
        .map(|j| if j < nv { q_int(-k * k) } else { q_int(a[j - nv] * a[j - nv]) })
        .collect();
    let mut out = Poly::new();
    let mut alpha = vec![0u32; vars];
    fn rec(
        j: usize,
        left: u32,
        alpha: &mut Vec<u32>,
        f: &mut dyn FnMut(&[u32]),
    ) {
        if j + 1 == alpha.len() {
            alpha[j] = left;
            f(alpha);
            return;
        }
        for x in 0..=left {
            alpha[j] = x;
            rec(j + 1, left - x, alpha, f);
        }
    }
    if vars == 0 {
        return out;
    }
    rec(0, degree as u32, &mut alpha, &mut |al: &[u32]| {
        let mut d = Deco::unit(graph);
        let mut c = Q::one();
        for (j, &e) in al.iter().enumerate() {
            if e == 0 {
                continue;
            }
            c *= num_traits::pow(coeff[j].clone(), e as usize) / Q::from_integer(factorial(e));
            if j < nv {
                d.kappa[j].extend(std::iter::repeat_n(1, e as usize));
            } else {
                d.psi[j - nv] = e;
            }
        }
        if !c.is_zero() && frame.fits(&d) {
            *out.entry(d).or_insert_with(Q::zero) += c;
        }
    });
    out.retain(|_, c| !c.is_zero());
    out
}

fn pieces(g: u32, a: &[i64], k: i64, d: usize) -> Result<Arc<Vec<Piece>>> {
    let key = (g, a.to_vec(), k, d);
    if let Some(hit) = piece_cache().lock().get(&key) {
        return Ok(hit.clone());
    }
    let n = a.len();
    let graphs = stable_graphs_cached(g, n)?;
    let built: Vec<Vec<Piece>> = graphs
        .par_iter()
        .filter(|gr| gr.num_edges() <= d)
        .map(|graph| {
            let frame = Frame::new(graph);
            let aut = q_int(graph.automorphism_order() as i64);
            let mut vecs = Vec::new();
            exponent_vectors(graph.num_edges(), d, &mut Vec::new(), &mut vecs);
            let mut out = Vec::new();
            for m in vecs {
                let used: usize = m.iter().map(|&x| x as usize).sum();
                let mut poly = exp_part(graph, &frame, a, k, d - used);
                for (e, &me) in m.iter().enumerate() {
                    // (−1)^{m+1}/m! (ψ_h + ψ_h')^{m−1}
                    let lin = psi_linear(graph, &[(graph.side(e, 0), Q::one()), (graph.side(e, 1), Q::one())]);
                    let mut factor = Poly::new();
                    factor.insert(Deco::unit(graph), Q::one());
                    for _ in 1..me {
                        factor = poly_mul(&factor, &lin, &frame);
                    }
                    let sign = if me % 2 == 1 { 1 } else { -1 };
                    let scale = q_int(sign) / Q::from_integer(factorial(me));
                    factor.values_mut().for_each(|c| *c *= &scale);
                    poly = poly_mul(&poly, &factor, &frame);
                }
                let mut class = TautClass::zero(g, n);
                class.add_poly(graph, poly, &(Q::one() / &aut));
                if !class.is_zero() {
                    out.push(Piece {
                        graph: graph.clone(),
                        exponents: m,
                        class,
                    });
                }
            }
            out
        })
        .collect();
    let list = Arc::new(built.into_iter().flatten().collect::<Vec<_>>());
    Ok(piece_cache().lock().entry(key).or_insert(list).clone())
}

/// `Σ_w ∏_e (w(h)w(h'))^{m_e} / r^{h¹}` for each exponent vector of one graph.
fn moments(graph: &StableGraph, a: &[i64], k: i64, r: u64, exps: &[&Vec<u32>]) -> Result<Vec<Q>> {
    let ws = admissible_weightings_k(graph, a, k, r)?;
    let mut sums = vec![BigInt::zero(); exps.len()];
    for w in &ws {
        let prods: Vec<BigInt> = (0..graph.num_edges())
            .map(|e| BigInt::from(w[graph.side(e, 0)]) * BigInt::from(w[graph.side(e, 1)]))
            .collect();
        for (j, m) in exps.iter().enumerate() {
            let mut t = BigInt::one();
            for (e, &me) in m.iter().enumerate() {
                t *= num_traits::pow(prods[e].clone(), me as usize);
            }
            sums[j] += t;
        }
    }
    let denom = num_traits::pow(BigInt::from(r), graph.h1() as usize);
    Ok(sums.into_iter().map(|s| Q::new(s, denom.clone())).collect())
}

/// Coefficient of each generator at level `r`, keyed by generator.
fn coefficients_at(list: &[Piece], a: &[i64], k: i64, r: u64) -> Result<BTreeMap<DecoratedStratum, Q>> {
    let mut by_graph: BTreeMap<&StableGraph, Vec<usize>> = BTreeMap::new();
    for (i, p) in list.iter().enumerate() {
        by_graph.entry(&p.graph).or_default().push(i);
    }
    let groups: Vec<(&StableGraph, Vec<usize>)> = by_graph.into_iter().collect();
    let weighted: Vec<Vec<(usize, Q)>> = groups
        .par_iter()
        .map(|(graph, idx)| {
            let exps: Vec<&Vec<u32>> = idx.iter().map(|&i| &list[i].exponents).collect();
            let ms = moments(graph, a, k, r, &exps)?;
            Ok(idx.iter().copied().zip(ms).collect())
        })
        .collect::<Result<_>>()?;
    let mut out: BTreeMap<DecoratedStratum, Q> = BTreeMap::new();
    for (i, m) in weighted.into_iter().flatten() {
        if m.is_zero() {
            continue;
        }
        for (s, c) in list[i].class.terms() {
            *out.entry(s.clone()).or_insert_with(Q::zero) += c * &m;
        }
    }
    out.retain(|_, c| !c.is_zero());
    Ok(out)
}

/// `P^{d,r}_{g,μ}` for the canonical case `k = 1`.
pub fn pixton_fixed_r(g: u32, mu: &[i64], d: usize, r: u64) -> Result<TautClass> {
    pixton_fixed_r_k(g, mu, 1, d, r)
}

pub fn pixton_fixed_r_k(g: u32, mu: &[i64], k: i64, d: usize, r: u64) -> Result<TautClass> {
    check_input(g, mu, k, "pixton_fixed_r")?;
    if r == 0 {
        return Err(Error::input("pixton", "pixton_fixed_r", "r must be positive"));
    }
    let n = mu.len();
    if d > 3 * g as usize + n - 3 {
        return Ok(TautClass::zero(g, n));
    }
    let a = shifted(mu, k);
    let list = pieces(g, &a, k, d)?;
    let mut class = TautClass::zero(g, n);
    for (s, c) in coefficients_at(&list, &a, k, r)? {
        class.add_term(s, c);
    }
    Ok(class)
}

/// The constant term together with the levels used to certify it.
#[derive(Clone, Debug)]
pub struct PixtonReport {
    pub class: TautClass,
    pub samples: Vec<u64>,
    pub holdout: Vec<u64>,
}

/// Value at `x` of the Lagrange interpolant through `(xs, ys)`.
fn lagrange_at(xs: &[Q], ys: &[Q], x: &Q) -> Q {
    let mut total = Q::zero();
    for i in 0..xs.len() {
        if ys[i].is_zero() {
            continue;
        }
        let mut term = ys[i].clone();
        for j in 0..xs.len() {
            if i != j {
                term *= (x - &xs[j]) / (&xs[i] - &xs[j]);
            }
        }
        total += term;
    }
    total
}

/// `P^d_{g,μ}` for `k = 1`.
pub fn pixton_class(g: u32, mu: &[i64], d: usize, opts: &PixtonOptions) -> Result<PixtonReport> {
    pixton_class_k(g, mu, 1, d, opts)
}

/// The constant term in `r` of `P^{d,r}`, interpolated per generator from
/// consecutive levels starting at `r₀ = 2(Σ|a_i| + d + 1)` and checked on
/// three further levels; the node count doubles until the check passes.
pub fn pixton_class_k(
    g: u32,
    mu: &[i64],
    k: i64,
    d: usize,
    opts: &PixtonOptions,
) -> Result<PixtonReport> {
    check_input(g, mu, k, "pixton_class")?;
    let n = mu.len();
    if d > 3 * g as usize + n - 3 {
        return Ok(PixtonReport {
            class: TautClass::zero(g, n),
            samples: Vec::new(),
            holdout: Vec::new(),
        });
    }
    let a = shifted(mu, k);
    let list = pieces(g, &a, k, d)?;
    let r0 = 2 * (a.iter().map(|x| x.unsigned_abs()).sum::<u64>() + d as u64 + 1);
    let mut nodes = 2 * d + 1;
    let mut cache: BTreeMap<u64, BTreeMap<DecoratedStratum, Q>> = BTreeMap::new();
    loop {
        if nodes > opts.max_samples {
            return Err(Error::Interpolation {
                samples: opts.max_samples,
                first_r: r0,
            });
        }
        let samples: Vec<u64> = (r0..r0 + nodes as u64).collect();
        let holdout: Vec<u64> = (r0 + nodes as u64..r0 + nodes as u64 + 3).collect();
        let missing: Vec<u64> = samples
            .iter()
            .chain(&holdout)
            .copied()
            .filter(|r| !cache.contains_key(r))
            .collect();
        let fresh: Vec<(u64, BTreeMap<DecoratedStratum, Q>)> = missing
            .par_iter()
            .map(|&r| Ok((r, coefficients_at(&list, &a, k, r)?)))
            .collect::<Result<_>>()?;
        cache.extend(fresh);
        let mut keys: Vec<&DecoratedStratum> = Vec::new();
        for r in samples.iter().chain(&holdout) {
            keys.extend(cache[r].keys());
        }
        keys.sort();
        keys.dedup();
        let value = |r: u64, s: &DecoratedStratum| cache[&r].get(s).cloned().unwrap_or_else(Q::zero);
        let xs: Vec<Q> = samples.iter().map(|&r| q_int(r as i64)).collect();
        let mut class = TautClass::zero(g, n);
        let mut ok = true;
        for s in keys {
            let ys: Vec<Q> = samples.iter().map(|&r| value(r, s)).collect();
            for &r in &holdout {
                if lagrange_at(&xs, &ys, &q_int(r as i64)) != value(r, s) {
                    ok = false;
                    break;
                }
            }
            if !ok {
                break;
            }
            class.add_term(s.clone(), lagrange_at(&xs, &ys, &Q::zero()));
        }
        if ok {
            return Ok(PixtonReport {
                class,
                samples,
                holdout,
            });
        }
        nodes *= 2;
    }
}

/// The double ramification cycle `DR_g(a) = 2^{−g} P^g_{g,a}` at `k = 0`.
pub fn dr_cycle(g: u32, a: &[i64], opts: &PixtonOptions) -> Result<TautClass> {
    let p = pixton_class_k(g, a, 0, g as usize, opts)?;
    Ok(p.class.scale(&q_frac(1, 1 << g)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weighting_counts() {
        let triv = StableGraph::trivial(1, 2);
        assert_eq!(admissible_weightings(&triv, &[1, -1], 7).unwrap().len(), 1);
        let banana = StableGraph::new(vec![0, 0], vec![0, 1], vec![(0, 1), (0, 1)]).unwrap();
        assert_eq!(admissible_weightings(&banana, &[1, -1], 5).unwrap().len(), 5);
        let lp = StableGraph::new(vec![0, 0], vec![0, 0], vec![(0, 1), (1, 1)]).unwrap();
        assert_eq!(admissible_weightings(&lp, &[1, -1], 4).unwrap().len(), 4);
    }

    #[test]
    fn degree_zero_is_unit() {
        let p = pixton_class(1, &[1, -1], 0, &PixtonOptions::default()).unwrap();
        assert_eq!(p.class, TautClass::one(1, 2).unwrap());
        let q = pixton_fixed_r(2, &[2], 0, 11).unwrap();
        assert_eq!(q, TautClass::one(2, 1).unwrap());
    }

    #[test]
    fn lagrange_recovers_constant() {
        let xs: Vec<Q> = (3..6).map(q_int).collect();
        let ys: Vec<Q> = xs.iter().map(|x| x * x + q_int(2)).collect();
        assert_eq!(lagrange_at(&xs, &ys, &Q::zero()), q_int(2));
    }
}

#[cfg(test)]
mod known_values {
    use super::*;
    use crate::intersect::{evaluate, pair};

    #[test]
    fn dr_of_zero_is_signed_lambda() {
        let opts = PixtonOptions::default();
        let dr1 = dr_cycle(1, &[0], &opts).unwrap();
        assert_eq!(evaluate(&dr1).unwrap(), q_frac(-1, 24));
        let dr2 = dr_cycle(2, &[0], &opts).unwrap();
        let psi2 = TautClass::psi(2, 1, 0, 2).unwrap();
        assert_eq!(pair(&dr2, &psi2).unwrap(), q_frac(7, 5760));
    }

    #[test]
    fn vanishing_above_genus() {
        let p = pixton_class(1, &[1, -1], 2, &PixtonOptions::default()).unwrap();
        assert_eq!(evaluate(&p.class).unwrap(), Q::zero());
    }
}
