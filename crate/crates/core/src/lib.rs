//! Exact computations in the tautological ring of the moduli spaces of stable
//! pointed curves.
//!
//! The crate covers the combinatorial side of twisted canonical divisors:
//!
//! * [`graph`]: stable graphs, canonical forms, automorphisms, enumeration of
//!   `G_{g,n}` and of simple star graphs.
//! * [`twist`]: the twist axioms (balancing, vanishing, sign, transitivity) on
//!   dual graphs and the enumeration of twists satisfying the degree conditions.
//! * [`strata`]: the strata algebra of decorated boundary strata `[Γ, γ]` with
//!   exact rational coefficients, gluing pushforwards, products, and the
//!   forgetful pushforward/pullback.
//! * [`intersect`]: top intersection numbers of ψ and κ classes, evaluation,
//!   pairings and equality certificates.
//! * [`pixton`]: admissible weightings mod `r` and Pixton's cycle `P^d_{g,μ}`.
//! * [`hclass`]: the weighted fundamental class `H_{g,μ}` as a star-graph sum
//!   and the recursion determining the closure classes `[H̄_g(μ)]`.
//!
//! All arithmetic is exact (`BigRational`).
//!
//! ```
//! use tautring::graph::enumerate_stable_graphs;
//!
//! let graphs = enumerate_stable_graphs(0, 4).unwrap();
//! assert_eq!(graphs.len(), 4);
//! ```

pub mod cache;
pub mod error;
pub mod format;
pub mod graph;
pub mod hclass;
pub mod intersect;
pub mod pixton;
pub mod strata;
pub mod twist;

pub use error::{Error, Result};

/// Exact rational numbers used for every coefficient and intersection number.
pub type Q = num_rational::BigRational;

pub fn q_int(v: i64) -> Q {
    Q::from_integer(v.into())
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}
