//! The weighted fundamental class `H_{g,μ}` as a sum over simple star graphs
//! and the recursion for the closure classes `[H̄_g(μ)]`.
//!
//! Closure classes are computed on sorted `μ` and relabeled to the input
//! order. Every recursive call is checked against a well-founded measure.

use std::collections::HashMap;

use num_traits::{One, Zero};
use parking_lot::Mutex;

use crate::cache::ClassCache;
use crate::graph::{enumerate_simple_star_graphs, StarFilter, StarGraph};
use crate::intersect::{compare_by_pairing, PairingReport};
use crate::pixton::{pixton_class, pixton_class_k, PixtonOptions};
use crate::strata::{compose_at_vertices, forget_pullback_many, forget_pushforward, TautClass};
use crate::twist::{enumerate_star_twists, star_edge_values};
use crate::{q_frac, q_int, Error, Result, Q};

/// A vector of multiplicities with `Σ m_i = k(2g − 2)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiDeg {
    pub g: u32,
    pub parts: Vec<i64>,
    pub k: i64,
}

impl MultiDeg {
    pub fn new(g: u32, parts: Vec<i64>, k: i64) -> Result<Self> {
        let n = parts.len();
        if 2 * g as usize + n <= 2 {
            return Err(Error::Unstable { op: "MultiDeg::new", g, n });
        }
        let sum: i64 = parts.iter().sum();
        if sum != k * (2 * g as i64 - 2) {
            return Err(Error::input(
                "hclass",
                "MultiDeg::new",
                format!("parts sum to {sum}, expected {}", k * (2 * g as i64 - 2)),
            ));
        }
        Ok(MultiDeg { g, parts, k })
    }

    pub fn is_holomorphic(&self) -> bool {
        self.parts.iter().all(|&m| m >= 0)
    }

    pub fn is_meromorphic(&self) -> bool {
        !self.is_holomorphic()
    }
}

/// `(g, sorted μ)` and the permutation sending sorted positions to input positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureKey {
    pub g: u32,
    pub sorted: Vec<i64>,
    pub perm: Vec<usize>,
}

impl ClosureKey {
    pub fn new(g: u32, mu: &[i64]) -> Self {
        let mut idx: Vec<usize> = (0..mu.len()).collect();
        idx.sort_by_key(|&i| (mu[i], i));
        ClosureKey {
            g,
            sorted: idx.iter().map(|&i| mu[i]).collect(),
            perm: idx,
        }
    }

    fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }
}

/// Source of `H_{g,μ}` in the recursion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HMode {
    /// `2^{−g} P^g_{g,μ}`.
    Pixton,
    /// The double ramification cycle `2^{−g} P^g` at `k = 0`; available for
    /// `g ≤ 1`, where it equals `H_{g,μ}` without any conjecture.
    DoubleRamification,
}

impl HMode {
    fn tag(self) -> &'static str {
        match self {
            HMode::Pixton => "pixton",
            HMode::DoubleRamification => "dr",
        }
    }
}

/// One summand of the star-graph formula.
#[derive(Clone, Debug)]
pub struct StarTerm {
    pub star: StarGraph,
    /// `I(e)` on the center side, by edge index.
    pub twist: Vec<i64>,
    pub aut: usize,
    /// `∏ I(e) / |Aut Γ|`.
    pub coefficient: Q,
    pub class: TautClass,
}

type Measure = (u32, usize, u8, i64);

fn measure(g: u32, mu: &[i64]) -> Measure {
    if mu.iter().any(|&m| m < 0) {
        (g, mu.len(), 1, 0)
    } else {
        let max = mu.iter().copied().max().unwrap_or(0);
        (g, mu.len(), 0, 2 * g as i64 - 2 - max)
    }
}

fn mu_string(mu: &[i64]) -> String {
    mu.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(",")
}

/// Memoized evaluation of closure classes and `H_{g,μ}`.
pub struct ClosureEngine {
    mode: HMode,
    opts: PixtonOptions,
    cache: Option<ClassCache>,
    memo: Mutex<HashMap<(u32, Vec<i64>), TautClass>>,
    h_memo: Mutex<HashMap<(u32, Vec<i64>), TautClass>>,
    log: Mutex<Vec<String>>,
}

impl ClosureEngine {
    pub fn new(mode: HMode, opts: PixtonOptions) -> Self {
        ClosureEngine {
            mode,
            opts,
            cache: None,
            memo: Mutex::new(HashMap::new()),
            h_memo: Mutex::new(HashMap::new()),
            log: Mutex::new(Vec::new()),
        }
    }

    pub fn with_cache(mut self, cache: ClassCache) -> Self {
        self.cache = Some(cache);
        self
    }

    pub fn mode(&self) -> HMode {
        self.mode
    }

    /// Star-graph terms dropped during assembly, with the reason.
    pub fn log(&self) -> Vec<String> {
        self.log.lock().clone()
    }

    fn cached(&self, key: &str, f: impl FnOnce() -> Result<TautClass>) -> Result<TautClass> {
        if let Some(c) = self.cache.as_ref().and_then(|c| c.get(key)) {
            return Ok(c);
        }
        let value = f()?;
        if let Some(c) = &self.cache {
            c.put(key, &value)?;
        }
        Ok(value)
    }

    /// `H_{g,μ}` for strictly meromorphic `μ`, from the configured source.
    pub fn h_weighted(&self, g: u32, mu: &[i64]) -> Result<TautClass> {
        let md = MultiDeg::new(g, mu.to_vec(), 1)?;
        if !md.is_meromorphic() {
            return Err(Error::input("hclass", "h_weighted", "μ must be strictly meromorphic"));
        }
        let key = ClosureKey::new(g, mu);
        let memo_key = (g, key.sorted.clone());
        let hit = self.h_memo.lock().get(&memo_key).cloned();
        let sorted_class = match hit {
            Some(c) => c,
            None => {
                let ck = format!("h:{}:{}:{}", self.mode.tag(), g, mu_string(&key.sorted));
                let c = self.cached(&ck, || self.h_sorted(g, &key.sorted))?;
                self.h_memo.lock().entry(memo_key).or_insert(c).clone()
            }
        };
        restore(&sorted_class, &key)
    }

    fn h_sorted(&self, g: u32, mu: &[i64]) -> Result<TautClass> {
        let scale = q_frac(1, 1i64 << g);
        match self.mode {
            HMode::Pixton => Ok(pixton_class(g, mu, g as usize, &self.opts)?.class.scale(&scale)),
            HMode::DoubleRamification => {
                if g > 1 {
                    return Err(Error::input(
                        "hclass",
                        "h_weighted",
                        "the double ramification source only covers g ≤ 1",
                    ));
                }
                // H_{g,μ} is the double ramification cycle of μ itself
                Ok(pixton_class_k(g, mu, 0, g as usize, &self.opts)?.class.scale(&scale))
            }
        }
    }

    /// `[H̄_g(μ)]`, of degree `g` for strictly meromorphic and `g − 1` for
    /// holomorphic `μ`.
    pub fn closure_class(&self, g: u32, mu: &[i64]) -> Result<TautClass> {
        MultiDeg::new(g, mu.to_vec(), 1)?;
        self.closure_checked(g, mu, None)
    }

    fn closure_checked(&self, g: u32, mu: &[i64], parent: Option<Measure>) -> Result<TautClass> {
        let key = ClosureKey::new(g, mu);
        let m = measure(g, &key.sorted);
        if let Some(p) = parent {
            assert!(m < p, "closure recursion does not descend: {m:?} after {p:?}");
        }
        let memo_key = (g, key.sorted.clone());
        let hit = self.memo.lock().get(&memo_key).cloned();
        let sorted_class = match hit {
            Some(c) => c,
            None => {
                let ck = format!("closure:{}:{}:{}", self.mode.tag(), g, mu_string(&key.sorted));
                let c = self.cached(&ck, || self.closure_sorted(g, &key.sorted, m))?;
                let mut memo = self.memo.lock();
                match memo.get(&memo_key) {
                    Some(old) => {
                        assert_eq!(old, &c, "closure memo collision with different values");
                        old.clone()
                    }
                    None => {
                        memo.insert(memo_key, c.clone());
                        c
                    }
                }
            }
        };
        restore(&sorted_class, &key)
    }

    fn closure_sorted(&self, g: u32, mu: &[i64], m: Measure) -> Result<TautClass> {
        let n = mu.len();
        let meromorphic = mu.iter().any(|&x| x < 0);
        if g == 0 {
            return if meromorphic {
                TautClass::one(0, n)
            } else {
                Ok(TautClass::zero(0, n))
            };
        }
        if meromorphic {
            let negatives: Vec<i64> = mu.iter().copied().filter(|&x| x < 0).collect();
            if negatives == [-1] {
                // a single simple pole has nonzero residue
                return Ok(TautClass::zero(g, n));
            }
            return self.formula(g, mu, Some(m));
        }
        if g == 1 {
            return TautClass::one(1, n);
        }
        let zeros: Vec<usize> = (0..n).filter(|&i| mu[i] == 0).collect();
        if !zeros.is_empty() {
            let stripped: Vec<i64> = mu.iter().copied().filter(|&x| x != 0).collect();
            let base = self.closure_checked(g, &stripped, Some(m))?;
            return forget_pullback_many(&base, &zeros);
        }
        self.raise_largest_part(g, mu, m)
    }

    /// Holomorphic `μ` without zero parts, sorted: push forward the star-graph
    /// identity for `μ⁺ = (m_1, …, m_n + 1, −1)` and solve for the term of
    /// the graph carrying `{m_n + 1, −1}` at a rational center.
    fn raise_largest_part(&self, g: u32, mu: &[i64], m: Measure) -> Result<TautClass> {
        let n = mu.len();
        let mut plus = mu.to_vec();
        plus[n - 1] += 1;
        plus.push(-1);
        let mut total = forget_pushforward(&self.h_weighted(g, &plus)?)?;
        let stars = self.contributing(g, &plus, false)?;
        for (star, twists) in stars {
            let special = star.graph.num_vertices() == 2
                && star.graph.num_edges() == 1
                && star.graph.genera()[star.center] == 0
                && {
                    let mut at = star.graph.markings_at(star.center);
                    at.sort_unstable();
                    at == [n - 1, n]
                };
            if special {
                continue;
            }
            for twist in twists {
                let term = self.term(&star, &twist, &plus, Some(m))?;
                total = total.sub(&forget_pushforward(&term.class)?)?;
            }
        }
        Ok(total.scale(&(Q::one() / q_int(mu[n - 1] + 1))))
    }

    fn formula(&self, g: u32, mu: &[i64], parent: Option<Measure>) -> Result<TautClass> {
        let mut total = self.h_weighted(g, mu)?;
        for (star, twists) in self.contributing(g, mu, false)? {
            for twist in twists {
                let term = self.term(&star, &twist, mu, parent)?;
                total = total.sub(&term.class)?;
            }
        }
        Ok(total)
    }

    /// `H_{g,μ}` minus the nontrivial star-graph terms, for strictly
    /// meromorphic `μ`, with no shortcut for `μ` itself.
    pub fn closure_by_formula(&self, g: u32, mu: &[i64]) -> Result<TautClass> {
        let md = MultiDeg::new(g, mu.to_vec(), 1)?;
        if !md.is_meromorphic() {
            return Err(Error::input("hclass", "closure_by_formula", "μ must be strictly meromorphic"));
        }
        self.formula(g, mu, Some(measure(g, mu)))
    }

    /// Star graphs with a genus-0 outlying vertex or no twist are dropped
    /// with a log entry; the others come with their twists.
    fn contributing(
        &self,
        g: u32,
        mu: &[i64],
        include_trivial: bool,
    ) -> Result<Vec<(StarGraph, Vec<Vec<i64>>)>> {
        let mut out = Vec::new();
        for star in enumerate_simple_star_graphs(g, mu, include_trivial, StarFilter::All)? {
            if star.outlying().iter().any(|&v| star.graph.genera()[v] == 0) {
                self.log.lock().push(format!(
                    "({g}; {}) dropped {star}: genus-0 outlying vertex",
                    mu_string(mu)
                ));
                continue;
            }
            let twists: Vec<Vec<i64>> = enumerate_star_twists(&star, mu)?
                .iter()
                .map(|t| star_edge_values(&star, t))
                .collect();
            if twists.is_empty() {
                self.log
                    .lock()
                    .push(format!("({g}; {}) dropped {star}: no twist", mu_string(mu)));
                continue;
            }
            out.push((star, twists));
        }
        Ok(out)
    }

    fn term(&self, star: &StarGraph, twist: &[i64], mu: &[i64], parent: Option<Measure>) -> Result<StarTerm> {
        let graph = &star.graph;
        let mut classes = Vec::with_capacity(graph.num_vertices());
        for v in 0..graph.num_vertices() {
            let parts: Vec<i64> = graph
                .half_edges_at(v)
                .into_iter()
                .map(|h| match graph.edge_of(h) {
                    None => mu[h],
                    Some((e, _)) if v == star.center => -twist[e] - 1,
                    Some((e, _)) => twist[e] - 1,
                })
                .collect();
            let gv = graph.genera()[v];
            let c = if star.is_trivial() && parent.is_none() {
                self.closure_class(gv, &parts)?
            } else {
                self.closure_checked(gv, &parts, parent)?
            };
            classes.push(c);
        }
        let aut = star.automorphism_order();
        let prod: i64 = twist.iter().product();
        let coefficient = q_int(prod) / q_int(aut as i64);
        let class = compose_at_vertices(graph, &classes)?.scale(&coefficient);
        Ok(StarTerm {
            star: star.clone(),
            twist: twist.to_vec(),
            aut,
            coefficient,
            class,
        })
    }

    /// Every term of the star-graph formula for strictly meromorphic `μ`.
    pub fn star_terms(&self, g: u32, mu: &[i64], include_trivial: bool) -> Result<Vec<StarTerm>> {
        let md = MultiDeg::new(g, mu.to_vec(), 1)?;
        if !md.is_meromorphic() {
            return Err(Error::input("hclass", "star_sum", "μ must be strictly meromorphic"));
        }
        let mut out = Vec::new();
        for (star, twists) in self.contributing(g, mu, include_trivial)? {
            for twist in twists {
                out.push(self.term(&star, &twist, mu, None)?);
            }
        }
        Ok(out)
    }

    /// `Σ_Γ Σ_I ∏ I(e)/|Aut Γ| ξ_Γ*[…]` with closures from this engine.
    pub fn star_sum(&self, g: u32, mu: &[i64], include_trivial: bool) -> Result<TautClass> {
        let mut total = TautClass::zero(g, mu.len());
        for t in self.star_terms(g, mu, include_trivial)? {
            total = total.add(&t.class)?;
        }
        Ok(total)
    }
}

fn restore(sorted_class: &TautClass, key: &ClosureKey) -> Result<TautClass> {
    if key.is_identity() {
        Ok(sorted_class.clone())
    } else {
        sorted_class.relabel(&key.perm)
    }
}

/// `[H̄_g(μ)]` with the Pixton source and default options.
pub fn closure_class(g: u32, mu: &[i64]) -> Result<TautClass> {
    ClosureEngine::new(HMode::Pixton, PixtonOptions::default()).closure_class(g, mu)
}

/// Both sides of `H_{g,μ} = 2^{−g} P^g_{g,μ}` compared through all pairings.
#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub g: u32,
    pub mu: Vec<i64>,
    /// The star side used no instance of the identity being tested.
    pub conjecture_free: bool,
    pub terms: Vec<StarTerm>,
    pub star_side: TautClass,
    pub pixton_side: TautClass,
    pub samples: Vec<u64>,
    pub pairing: PairingReport,
    pub dropped: Vec<String>,
}

/// Star side from closure classes (the double ramification source for
/// `g ≤ 1`, the recursion otherwise) against `2^{−g} P^g_{g,μ}`.
pub fn verify_conjecture_a(
    g: u32,
    mu: &[i64],
    opts: &PixtonOptions,
    cache: Option<ClassCache>,
) -> Result<VerifyReport> {
    let md = MultiDeg::new(g, mu.to_vec(), 1)?;
    if !md.is_meromorphic() {
        return Err(Error::input("hclass", "verify_conjecture_A", "μ must be strictly meromorphic"));
    }
    let conjecture_free = g <= 1;
    let mode = if conjecture_free { HMode::DoubleRamification } else { HMode::Pixton };
    let mut engine = ClosureEngine::new(mode, opts.clone());
    if let Some(c) = cache {
        engine = engine.with_cache(c);
    }
    let terms = engine.star_terms(g, mu, true)?;
    let mut star_side = TautClass::zero(g, mu.len());
    for t in &terms {
        star_side = star_side.add(&t.class)?;
    }
    let p = pixton_class(g, mu, g as usize, opts)?;
    let pixton_side = p.class.scale(&q_frac(1, 1i64 << g));
    let pairing = compare_by_pairing(&star_side, &pixton_side, g as usize)?;
    Ok(VerifyReport {
        g,
        mu: mu.to_vec(),
        conjecture_free,
        terms,
        star_side,
        pixton_side,
        samples: p.samples,
        pairing,
        dropped: engine.log(),
    })
}

impl VerifyReport {
    pub fn is_equal(&self) -> bool {
        self.pairing.verdict.is_equal()
    }

    pub fn nonzero_pairings(&self) -> usize {
        self.pairing.left.iter().filter(|x| !x.is_zero()).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_cases() {
        let e = ClosureEngine::new(HMode::Pixton, PixtonOptions::default());
        assert_eq!(e.closure_class(0, &[2, -1, -1, -2]).unwrap(), TautClass::one(0, 4).unwrap());
        assert_eq!(e.closure_class(1, &[0, 0, 0]).unwrap(), TautClass::one(1, 3).unwrap());
        assert!(e.closure_class(1, &[1, -1]).unwrap().is_zero());
        assert!(e.closure_class(1, &[1, 1]).is_err());
    }

    #[test]
    fn closure_key_restores_order() {
        let k = ClosureKey::new(1, &[2, -1, -1]);
        assert_eq!(k.sorted, vec![-1, -1, 2]);
        assert_eq!(k.perm, vec![1, 2, 0]);
    }

    #[test]
    fn measure_orders_ladder() {
        assert!(measure(2, &[1, 1]) > measure(2, &[0, 2]));
        assert!(measure(2, &[2]) < measure(2, &[1, 1]));
        assert!(measure(1, &[3, -1, -2]) < measure(2, &[3, -1]));
    }
}
