use num_traits::Zero;
use proptest::prelude::*;

use tautring::graph::StableGraph;
use tautring::intersect::{equals_pairing, evaluate, generators, kappa_psi_integral, pair, psi_integral, PairingVerdict};
use tautring::strata::{DecoratedStratum, TautClass};
use tautring::{q_frac, q_int, Q};

// Frozen output of tests/oracles/psi_oracle.py.
const FIXTURES: &[(u32, &[u32], i64, i64)] = &[
    (0, &[0, 0, 0], 1, 1),
    (0, &[1, 0, 0, 0], 1, 1),
    (1, &[1], 1, 24),
    (1, &[1, 1], 1, 24),
    (1, &[2, 0], 1, 24),
    (2, &[4], 1, 1152),
    (2, &[1, 4], 1, 384),
    (2, &[2, 3], 29, 5760),
    (2, &[0, 5], 1, 1152),
    (2, &[2, 2, 2], 7, 240),
    (2, &[1, 2, 3], 29, 1440),
    (2, &[0, 3, 3], 29, 2880),
    (2, &[1, 1, 4], 1, 96),
    (3, &[7], 1, 82944),
    (3, &[3, 3, 3], 583, 96768),
];

#[test]
fn oracle_fixtures() {
    for &(g, exps, p, q) in FIXTURES {
        assert_eq!(psi_integral(g, exps).unwrap(), q_frac(p, q), "g = {g}, {exps:?}");
    }
}

#[test]
fn degree_mismatch_is_rejected() {
    assert!(psi_integral(1, &[2]).is_err());
    assert!(kappa_psi_integral(1, 1, &[2], &[0]).is_err());
}

#[test]
fn kappa_integrals() {
    assert_eq!(kappa_psi_integral(1, 1, &[1], &[0]).unwrap(), q_frac(1, 24));
    assert_eq!(kappa_psi_integral(0, 4, &[1], &[0, 0, 0, 0]).unwrap(), q_int(1));
    assert_eq!(
        kappa_psi_integral(1, 1, &[1], &[0]).unwrap(),
        psi_integral(1, &[0, 2]).unwrap()
    );
    // κ_0 is the scalar 2g−2+n
    assert_eq!(
        kappa_psi_integral(1, 2, &[0, 0], &[1, 1]).unwrap(),
        q_int(4) * psi_integral(1, &[1, 1]).unwrap()
    );
}

#[test]
fn evaluate_examples() {
    assert_eq!(evaluate(&TautClass::psi(0, 4, 0, 1).unwrap()).unwrap(), q_int(1));
    let loop11 = StableGraph::new(vec![0], vec![0], vec![(0, 0)]).unwrap();
    assert_eq!(evaluate(&TautClass::boundary(loop11).unwrap()).unwrap(), q_int(1));
    assert!(evaluate(&TautClass::zero(1, 1)).unwrap().is_zero());
}

fn d1234() -> TautClass {
    TautClass::boundary(StableGraph::new(vec![0, 0], vec![0, 0, 1, 1], vec![(0, 1)]).unwrap()).unwrap()
}

#[test]
fn pairing_verdicts() {
    let psi1 = TautClass::psi(0, 4, 0, 1).unwrap();
    assert!(equals_pairing(&psi1, &d1234(), 1).unwrap().is_equal());
    assert!(equals_pairing(&psi1, &psi1, 1).unwrap().is_equal());
    match equals_pairing(&psi1, &psi1.scale(&q_int(2)), 1).unwrap() {
        PairingVerdict::Distinct { witness, left, right } => {
            assert_eq!(witness, DecoratedStratum::plain(StableGraph::trivial(0, 4)).unwrap());
            assert_eq!((left, right), (q_int(1), q_int(2)));
        }
        v => panic!("expected DISTINCT, got {}", v.label()),
    }
}

/// Distributes `total` units over `n` slots following `seq`.
fn spread(total: u32, n: usize, seq: &[usize]) -> Vec<u32> {
    let mut out = vec![0; n];
    for j in 0..total as usize {
        out[seq[j % seq.len()] % n] += 1;
    }
    out
}

const AMBIENTS: &[(u32, usize)] = &[(0, 4), (0, 5), (1, 1), (1, 2), (1, 3), (2, 1)];

fn random_class(g: u32, n: usize, d: usize, picks: &[(usize, i64)]) -> TautClass {
    let gens = generators(g, n, d).unwrap();
    let mut x = TautClass::zero(g, n);
    for &(i, c) in picks {
        x.add_term(gens[i % gens.len()].clone(), q_int(c));
    }
    x
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn string_equation(g in 0u32..3, n in 1usize..5, seq in prop::collection::vec(0usize..100, 1..16)) {
        prop_assume!(2 * g as usize + n > 2);
        let total = 3 * g + n as u32 - 2;
        let a = spread(total, n, &seq);
        let mut lhs = a.clone();
        lhs.push(0);
        let mut rhs = Q::zero();
        for i in 0..n {
            if a[i] > 0 {
                let mut b = a.clone();
                b[i] -= 1;
                rhs += psi_integral(g, &b).unwrap();
            }
        }
        prop_assert_eq!(psi_integral(g, &lhs).unwrap(), rhs);
    }

    #[test]
    fn dilaton_equation(g in 0u32..3, n in 1usize..5, seq in prop::collection::vec(0usize..100, 1..16)) {
        prop_assume!(2 * g as usize + n > 2);
        let total = 3 * g + n as u32 - 3;
        let a = spread(total, n, &seq);
        let mut lhs = a.clone();
        lhs.push(1);
        let factor = q_int(2 * g as i64 - 2 + n as i64);
        prop_assert_eq!(psi_integral(g, &lhs).unwrap(), factor * psi_integral(g, &a).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn pair_is_symmetric(
        amb in 0usize..AMBIENTS.len(),
        d in 0usize..6,
        xs in prop::collection::vec((0usize..500, -3i64..4), 1..4),
        ys in prop::collection::vec((0usize..500, -3i64..4), 1..4),
    ) {
        let (g, n) = AMBIENTS[amb];
        let dim = 3 * g as usize + n - 3;
        let d = d % (dim + 1);
        let x = random_class(g, n, d, &xs);
        let y = random_class(g, n, dim - d, &ys);
        prop_assert_eq!(pair(&x, &y).unwrap(), pair(&y, &x).unwrap());
    }
}
