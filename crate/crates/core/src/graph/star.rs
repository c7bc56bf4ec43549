use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::canon::apply_order_star;
use super::StableGraph;
use crate::twist::enumerate_star_twists;
use crate::{Error, Result};

/// A simple star graph: a center vertex, outlying vertices joined to the center
/// only, no self-edges, and every negative part of `μ` at the center.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StarGraph {
    pub graph: StableGraph,
    pub center: usize,
}

/// Which star graphs [`enumerate_simple_star_graphs`] returns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StarFilter {
    /// Every simple star graph.
    All,
    /// Only graphs with a nonempty twist set and no genus-0 outlying vertex
    /// (the others contribute zero to the star-graph sum).
    Contributing,
}

impl StarGraph {
    pub fn new(graph: StableGraph, center: usize) -> Result<Self> {
        graph.validate("StarGraph::new")?;
        let star = StarGraph { graph, center };
        for &(a, b) in star.graph.edges() {
            if a == b || (a != center && b != center) {
                return Err(Error::InvalidGraph {
                    op: "StarGraph::new",
                    reason: format!("edge ({a}, {b}) does not join the center to an outlying vertex"),
                });
            }
        }
        Ok(star)
    }

    pub fn is_trivial(&self) -> bool {
        self.graph.num_vertices() == 1
    }

    pub fn outlying(&self) -> Vec<usize> {
        (0..self.graph.num_vertices())
            .filter(|&v| v != self.center)
            .collect()
    }

    pub fn automorphism_order(&self) -> usize {
        self.graph.automorphism_order()
    }

    /// The parts of `μ` carried by vertex `v`, in marking order.
    pub fn parts_at(&self, mu: &[i64], v: usize) -> Vec<i64> {
        self.graph.markings_at(v).iter().map(|&i| mu[i]).collect()
    }

    fn check(&self, mu: &[i64]) -> bool {
        mu.iter()
            .enumerate()
            .all(|(i, &m)| m >= 0 || self.graph.legs()[i] == self.center)
    }
}

impl std::fmt::Display for StarGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "center {} in {}", self.center, self.graph)
    }
}

/// Outlying vertex types `(genus, number of edges to the center)` as
/// non-increasing sequences with total genus contribution `budget`.
fn outlying_types(
    budget: u32,
    max: (u32, usize),
    zero_cap: usize,
    prefix: &mut Vec<(u32, usize)>,
    out: &mut Vec<Vec<(u32, usize)>>,
) {
    out.push(prefix.clone());
    for g in 0..=budget {
        for e in 1..=(budget - g + 1) as usize {
            let cost = g + e as u32 - 1;
            if cost > budget || (g, e) > max {
                continue;
            }
            // genus-0 leaves cost no genus but need two legs each
            if cost == 0 && prefix.iter().filter(|t| **t == (0, 1)).count() >= zero_cap {
                continue;
            }
            prefix.push((g, e));
            outlying_types(budget - cost, (g, e), zero_cap, prefix, out);
            prefix.pop();
        }
    }
}

/// Enumerates simple star graphs in `G_{g,n}` for `μ`, one per isomorphism class.
///
/// With `include_trivial` the center-only graph is listed; this is only allowed
/// for strictly meromorphic `μ`.
pub fn enumerate_simple_star_graphs(
    g: u32,
    mu: &[i64],
    include_trivial: bool,
    filter: StarFilter,
) -> Result<Vec<StarGraph>> {
    let n = mu.len();
    if 2 * g as usize + n <= 2 {
        return Err(Error::Unstable {
            op: "enumerate_simple_star_graphs",
            g,
            n,
        });
    }
    let meromorphic = mu.iter().any(|&m| m < 0);
    if include_trivial && !meromorphic {
        return Err(Error::input(
            "graph",
            "enumerate_simple_star_graphs",
            "the trivial star graph is only admitted for strictly meromorphic μ",
        ));
    }
    let free: Vec<usize> = (0..n).filter(|&i| mu[i] >= 0).collect();
    let mut found: BTreeMap<StarGraph, ()> = BTreeMap::new();
    for g0 in 0..=g {
        let mut types = Vec::new();
        outlying_types(g - g0, (u32::MAX, usize::MAX), n / 2, &mut Vec::new(), &mut types);
        for ts in types {
            let used: u32 = ts.iter().map(|&(gv, e)| gv + e as u32 - 1).sum();
            if used != g - g0 {
                continue;
            }
            if ts.is_empty() && !include_trivial {
                continue;
            }
            let k = ts.len();
            let mut genera = vec![g0];
            let mut edges = Vec::new();
            for (j, &(gv, e)) in ts.iter().enumerate() {
                genera.push(gv);
                for _ in 0..e {
                    edges.push((0, j + 1));
                }
            }
            // distribute the nonnegative parts
            let choices = (k + 1).pow(free.len() as u32);
            for code in 0..choices {
                let mut legs = vec![0usize; n];
                let mut c = code;
                for &i in &free {
                    legs[i] = c % (k + 1);
                    c /= k + 1;
                }
                let graph = StableGraph::new_unchecked(genera.clone(), legs, edges.clone());
                if !graph.is_stable() {
                    continue;
                }
                let star = canonical_star(&graph, 0);
                found.insert(star, ());
            }
        }
    }
    let mut out = Vec::new();
    for star in found.into_keys() {
        debug_assert!(star.check(mu));
        if filter == StarFilter::Contributing {
            let genus0_out = star
                .outlying()
                .iter()
                .any(|&v| star.graph.genera()[v] == 0);
            if genus0_out || enumerate_star_twists(&star, mu)?.is_empty() {
                continue;
            }
        }
        out.push(star);
    }
    Ok(out)
}

/// Canonical form of a star graph with its center distinguished.
pub(crate) fn canonical_star(graph: &StableGraph, center: usize) -> StarGraph {
    let (canon, pos) = apply_order_star(graph, center);
    StarGraph {
        graph: canon,
        center: pos,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn genus_zero_lists_trivial_graph_first() {
        let all = enumerate_simple_star_graphs(0, &[1, -1, -2], true, StarFilter::All).unwrap();
        assert!(all.iter().any(|s| s.is_trivial()));
        let contributing =
            enumerate_simple_star_graphs(0, &[1, -1, -2], true, StarFilter::Contributing).unwrap();
        assert_eq!(contributing.len(), 1);
        assert!(contributing[0].is_trivial());
    }

    #[test]
    fn holomorphic_with_trivial_is_rejected() {
        assert!(enumerate_simple_star_graphs(2, &[2], true, StarFilter::All).is_err());
        assert!(enumerate_simple_star_graphs(2, &[2], false, StarFilter::All).is_ok());
    }

    #[test]
    fn stars_are_stable_and_have_genus_g() {
        for (g, mu) in [(1u32, vec![2i64, -1, -1]), (2, vec![3, -1]), (2, vec![2, 1, -1])] {
            for s in enumerate_simple_star_graphs(g, &mu, true, StarFilter::All).unwrap() {
                assert_eq!(s.graph.genus(), g);
                assert!(s.graph.is_stable());
                assert!(s.check(&mu));
            }
        }
    }
}
