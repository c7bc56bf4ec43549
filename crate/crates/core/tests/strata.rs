use proptest::prelude::*;

use tautring::format::{class_from_str, class_to_string};
use tautring::graph::StableGraph;
use tautring::intersect::{equals_pairing, evaluate, generators};
use tautring::strata::{compose_at_vertices, forget_pullback, forget_pushforward, multiply, TautClass};
use tautring::{q_frac, q_int};

fn boundary(genera: Vec<u32>, legs: Vec<usize>, edges: Vec<(usize, usize)>) -> TautClass {
    TautClass::boundary(StableGraph::new(genera, legs, edges).unwrap()).unwrap()
}

#[test]
fn vector_space_laws() {
    let psi = TautClass::psi(0, 4, 0, 1).unwrap();
    let d = boundary(vec![0, 0], vec![0, 0, 1, 1], vec![(0, 1)]);
    let x = psi.add(&d).unwrap();
    assert_eq!(x.add(&TautClass::zero(0, 4)).unwrap(), x);
    assert_eq!(x.degree_part(1), x);
    assert!(x.degree_part(0).is_zero());
    assert!(x.scale(&q_int(0)).is_zero());
    assert!(x.add(&TautClass::zero(0, 5)).is_err());
}

#[test]
fn products() {
    let one = TautClass::one(0, 4).unwrap();
    let d12 = boundary(vec![0, 0], vec![0, 0, 1, 1], vec![(0, 1)]);
    let d13 = boundary(vec![0, 0], vec![0, 1, 0, 1], vec![(0, 1)]);
    assert_eq!(multiply(&d12, &one).unwrap(), d12);
    assert!(multiply(&d12, &d13).unwrap().is_zero());
    let d = boundary(vec![0, 0], vec![0, 0, 1, 1, 1], vec![(0, 1)]);
    assert_eq!(evaluate(&multiply(&d, &d).unwrap()).unwrap(), q_int(-1));
    assert!(multiply(&d12, &TautClass::one(0, 5).unwrap()).is_err());
}

#[test]
fn compose_examples() {
    let one = TautClass::one(1, 3).unwrap();
    assert_eq!(compose_at_vertices(&StableGraph::trivial(1, 3), &[one.clone()]).unwrap(), one);
    let gr = StableGraph::new(vec![0, 1], vec![0, 0], vec![(0, 1)]).unwrap();
    let units = [TautClass::one(0, 3).unwrap(), TautClass::one(1, 1).unwrap()];
    assert_eq!(compose_at_vertices(&gr, &units).unwrap(), TautClass::boundary(gr.clone()).unwrap());
    let with_psi = [TautClass::one(0, 3).unwrap(), TautClass::psi(1, 1, 0, 1).unwrap()];
    let x = compose_at_vertices(&gr, &with_psi).unwrap();
    assert_eq!(x.len(), 1);
    let (s, c) = x.terms().iter().next().unwrap();
    assert_eq!(c, &q_int(1));
    assert_eq!(s.degree(), 2);
    assert_eq!(s.psi().iter().sum::<u32>(), 1);
    assert!(compose_at_vertices(&gr, &units[..1]).is_err());
}

#[test]
fn projection_formula_spot_checks() {
    // ∫ ξ_*(1) · ψ_1^{dim−1} against the per-vertex integrals, one-edge graphs
    for (g, n) in [(1, 2), (2, 1)] {
        for gr in tautring::graph::enumerate_stable_graphs(g, n).unwrap() {
            if gr.num_edges() != 1 {
                continue;
            }
            let dim = gr.ambient_dim();
            let psi = TautClass::psi(g, n, 0, (dim - 1) as u32).unwrap();
            let lhs = evaluate(&multiply(&TautClass::boundary(gr.clone()).unwrap(), &psi).unwrap()).unwrap();
            let mut classes = Vec::new();
            for v in 0..gr.num_vertices() {
                let nv = gr.valence(v);
                let gv = gr.genera()[v];
                let c = if gr.markings_at(v).contains(&0) {
                    let slot = gr.markings_at(v).iter().position(|&i| i == 0).unwrap();
                    TautClass::psi(gv, nv, slot, (dim - 1) as u32)
                } else {
                    TautClass::one(gv, nv)
                };
                classes.push(c.unwrap());
            }
            let rhs = evaluate(&compose_at_vertices(&gr, &classes).unwrap()).unwrap();
            assert_eq!(lhs, rhs, "{gr}");
        }
    }
}

#[test]
fn forgetful_pushforward() {
    assert_eq!(
        forget_pushforward(&TautClass::psi(1, 2, 1, 2).unwrap()).unwrap(),
        TautClass::kappa(1, 1, 1).unwrap()
    );
    assert!(forget_pushforward(&TautClass::one(1, 2).unwrap()).unwrap().is_zero());
    assert_eq!(
        forget_pushforward(&TautClass::psi(1, 2, 1, 1).unwrap()).unwrap(),
        TautClass::one(1, 1).unwrap()
    );
}

#[test]
fn forgetful_pullback() {
    assert_eq!(forget_pullback(&TautClass::one(0, 4).unwrap()).unwrap(), TautClass::one(0, 5).unwrap());
    let pulled = forget_pullback(&TautClass::psi(0, 4, 0, 1).unwrap()).unwrap();
    let d15 = boundary(vec![0, 0], vec![0, 1, 1, 1, 0], vec![(0, 1)]);
    let expected = TautClass::psi(0, 5, 0, 1).unwrap().sub(&d15).unwrap();
    assert!(equals_pairing(&pulled, &expected, 1).unwrap().is_equal());
    // ε_* ψ_{n+1} τ^* x = (2g−2+n) x
    for (g, n) in [(1, 1), (0, 4), (1, 2)] {
        for s in generators(g, n, 1).unwrap().iter() {
            let x = TautClass::from_stratum(s.clone(), q_int(1));
            let up = multiply(&forget_pullback(&x).unwrap(), &TautClass::psi(g, n + 1, n, 1).unwrap()).unwrap();
            let back = forget_pushforward(&up).unwrap();
            let kappa0 = q_int(2 * g as i64 - 2 + n as i64);
            assert!(equals_pairing(&back, &x.scale(&kappa0), 1).unwrap().is_equal(), "{s}");
        }
    }
}

#[test]
fn relabel_examples() {
    let d = boundary(vec![0, 0], vec![0, 0, 1, 1], vec![(0, 1)]);
    assert_eq!(d.relabel(&[0, 1, 2, 3]).unwrap(), d);
    let moved = d.relabel(&[2, 1, 0, 3]).unwrap();
    assert_eq!(moved, boundary(vec![0, 0], vec![0, 1, 1, 0], vec![(0, 1)]));
    assert!(d.relabel(&[0, 0, 1, 2]).is_err());
}

const AMBIENTS: &[(u32, usize)] = &[(0, 4), (0, 5), (1, 1), (1, 2), (1, 3), (2, 1)];

fn random_class(g: u32, n: usize, d: usize, picks: &[(usize, i64, i64)]) -> TautClass {
    let gens = generators(g, n, d).unwrap();
    let mut x = TautClass::zero(g, n);
    for &(i, p, q) in picks {
        x.add_term(gens[i % gens.len()].clone(), q_frac(p, q));
    }
    x
}

type Picks = Vec<(usize, i64, i64)>;

fn picks() -> impl Strategy<Value = Picks> {
    prop::collection::vec((0usize..500, -5i64..6, 1i64..7), 1..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn multiply_is_commutative_and_graded(amb in 0usize..AMBIENTS.len(), d1 in 0usize..4, d2 in 0usize..4, xs in picks(), ys in picks()) {
        let (g, n) = AMBIENTS[amb];
        let dim = 3 * g as usize + n - 3;
        let (d1, d2) = (d1 % (dim + 1), d2 % (dim + 1));
        let x = random_class(g, n, d1, &xs);
        let y = random_class(g, n, d2, &ys);
        let xy = multiply(&x, &y).unwrap();
        prop_assert_eq!(&xy, &multiply(&y, &x).unwrap());
        if !xy.is_zero() {
            prop_assert_eq!(xy.homogeneous_degree(), Some(d1 + d2));
        }
    }

    #[test]
    fn pullback_is_a_ring_map(amb in 0usize..4, d1 in 0usize..3, d2 in 0usize..3, xs in picks(), ys in picks()) {
        let (g, n) = [(0, 4), (1, 1), (1, 2), (2, 1)][amb];
        let dim = 3 * g as usize + n - 3;
        let (d1, d2) = (d1 % (dim + 1), d2 % (dim + 1));
        prop_assume!(d1 + d2 <= dim);
        let x = random_class(g, n, d1, &xs);
        let y = random_class(g, n, d2, &ys);
        let lhs = forget_pullback(&multiply(&x, &y).unwrap()).unwrap();
        let rhs = multiply(&forget_pullback(&x).unwrap(), &forget_pullback(&y).unwrap()).unwrap();
        prop_assert!(equals_pairing(&lhs, &rhs, d1 + d2).unwrap().is_equal());
    }

    #[test]
    fn class_files_round_trip(amb in 0usize..AMBIENTS.len(), d in 0usize..4, xs in picks()) {
        let (g, n) = AMBIENTS[amb];
        let dim = 3 * g as usize + n - 3;
        let x = random_class(g, n, d % (dim + 1), &xs);
        let text = class_to_string(&x);
        let back = class_from_str(&text).unwrap();
        prop_assert_eq!(&back, &x);
        prop_assert_eq!(class_to_string(&back), text);
    }
}
