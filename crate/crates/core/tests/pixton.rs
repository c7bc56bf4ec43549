use num_traits::Zero;

use tautring::graph::{enumerate_stable_graphs, StableGraph};
use tautring::intersect::{compare_by_pairing, generators};
use tautring::pixton::{admissible_weightings, dr_cycle, pixton_class, pixton_fixed_r, PixtonOptions};
use tautring::strata::TautClass;
use tautring::{q_int, Q};

#[test]
fn weighting_counts() {
    let trivial = StableGraph::trivial(1, 2);
    assert_eq!(admissible_weightings(&trivial, &[1, -1], 7).unwrap().len(), 1);
    let sep = StableGraph::new(vec![0, 1], vec![0, 0], vec![(0, 1)]).unwrap();
    assert!(admissible_weightings(&sep, &[1, -1], 7).unwrap().len() <= 1);
    let banana = StableGraph::new(vec![0, 0], vec![0, 1], vec![(0, 1), (0, 1)]).unwrap();
    let c = admissible_weightings(&banana, &[1, -1], 7).unwrap().len();
    assert!(c == 0 || c == 7);
    for (g, mu) in [(1, vec![2, -1, -1]), (2, vec![3, -1]), (2, vec![2])] {
        for gr in enumerate_stable_graphs(g, mu.len()).unwrap() {
            for r in [5u64, 7, 11] {
                let c = admissible_weightings(&gr, &mu, r).unwrap().len() as u64;
                assert!(c == 0 || c == r.pow(gr.h1()), "{gr} r = {r}: {c}");
            }
        }
    }
}

#[test]
fn degree_zero_is_the_unit() {
    for (g, mu) in [(0, vec![1, -1, -2]), (1, vec![2, -1, -1]), (2, vec![3, -1]), (2, vec![2, 1, -1])] {
        let p = pixton_class(g, &mu, 0, &PixtonOptions::default()).unwrap();
        assert_eq!(p.class, TautClass::one(g, mu.len()).unwrap());
    }
}

#[test]
fn above_the_dimension_is_zero() {
    assert!(pixton_class(1, &[1, -1], 3, &PixtonOptions::default()).unwrap().class.is_zero());
}

fn lagrange_at(xs: &[Q], ys: &[Q], x: &Q) -> Q {
    let mut total = Q::zero();
    for i in 0..xs.len() {
        let mut term = ys[i].clone();
        for j in 0..xs.len() {
            if i != j {
                term = term * (x - &xs[j]) / (&xs[i] - &xs[j]);
            }
        }
        total += term;
    }
    total
}

#[test]
fn fixed_r_values_are_polynomial() {
    let sep = StableGraph::new(vec![0, 1], vec![0, 0], vec![(0, 1)]).unwrap();
    let coeff = |r: u64| -> Q {
        let x = pixton_fixed_r(1, &[1, -1], 1, r).unwrap();
        x.terms()
            .iter()
            .filter(|(s, _)| s.graph().is_isomorphic(&sep) && s.degree() == 1)
            .map(|(_, c)| c.clone())
            .sum()
    };
    let rs = [5u64, 7, 11, 13];
    let xs: Vec<Q> = rs.iter().map(|&r| q_int(r as i64)).collect();
    let ys: Vec<Q> = rs.iter().map(|&r| coeff(r)).collect();
    assert_eq!(lagrange_at(&xs[..3], &ys[..3], &xs[3]), ys[3]);
}

#[test]
fn relabeling_commutes() {
    let a = pixton_fixed_r(1, &[2, -1, -1], 1, 9).unwrap();
    let b = pixton_fixed_r(1, &[-1, 2, -1], 1, 9).unwrap();
    assert_eq!(a.relabel(&[1, 0, 2]).unwrap(), b);
}

#[test]
fn interpolation_is_validated() {
    let p = pixton_class(1, &[2, -1, -1], 1, &PixtonOptions::default()).unwrap();
    assert_eq!(p.holdout.len(), 3);
    assert!(p.samples.iter().all(|r| !p.holdout.contains(r)));
    let tight = PixtonOptions { max_samples: 1 };
    assert!(matches!(
        pixton_class(1, &[2, -1, -1], 1, &tight),
        Err(tautring::Error::Interpolation { .. })
    ));
}

#[test]
fn vanishing_above_genus() {
    let p = pixton_class(1, &[1, -1], 2, &PixtonOptions::default()).unwrap();
    let report = compare_by_pairing(&p.class, &TautClass::zero(1, 2), 2).unwrap();
    assert!(report.verdict.is_equal());
    assert_eq!(report.generators.len(), generators(1, 2, 0).unwrap().len());
}

#[test]
fn double_ramification_in_genus_zero() {
    let dr = dr_cycle(0, &[2, -1, -1], &PixtonOptions::default()).unwrap();
    assert_eq!(dr, TautClass::one(0, 3).unwrap());
}
