use std::collections::BTreeSet;

use proptest::prelude::*;

use tautring::graph::{enumerate_simple_star_graphs, enumerate_stable_graphs, StableGraph, StarFilter, StarGraph};
use tautring::twist::{
    component_digraph, enumerate_star_twists, enumerate_twists_general, star_edge_values, twist_targets,
    validate_twist, Twist, TwistVerdict, Violation,
};

fn valid_values(graph: &StableGraph, make: impl Fn(i64) -> Vec<(usize, i64)>) -> Vec<i64> {
    (-5..=5)
        .filter(|&a| {
            let t = Twist::from_edge_values(graph, &make(a)).unwrap();
            validate_twist(graph, &t).unwrap().is_valid()
        })
        .collect()
}

#[test]
fn rational_bridge_one_point() {
    // C1, C2 elliptic; E rational with p1; p2 on C1
    let graph = StableGraph::new(vec![1, 1, 0], vec![2, 0], vec![(0, 1), (0, 2), (1, 2)]).unwrap();
    let make = |a: i64| vec![(0, -a), (1, a), (2, -2 - a)];
    assert_eq!(valid_values(&graph, make), vec![-1]);
    let t = Twist::from_edge_values(&graph, &make(1)).unwrap();
    match validate_twist(&graph, &t).unwrap() {
        TwistVerdict::Violated(Violation::Transitivity { cycle }) => assert_eq!(cycle.len(), 3),
        v => panic!("{v:?}"),
    }
    assert_eq!(component_digraph(&graph, &t).unwrap().num_classes(), 3);
    let found = enumerate_twists_general(&graph, &[2, 2], 1).unwrap();
    assert_eq!(found, vec![Twist::from_edge_values(&graph, &make(-1)).unwrap()]);
}

#[test]
fn two_rational_bridges() {
    // C1, C2 elliptic; E1, E2 rational carrying p1, p2
    let graph = StableGraph::new(vec![1, 1, 0, 0], vec![2, 3], vec![(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
    let make = |a: i64| vec![(0, a), (1, -2 - a), (2, -2 - a), (3, a)];
    assert_eq!(valid_values(&graph, make), vec![-1]);
    let found = enumerate_twists_general(&graph, &[2, 2], 1).unwrap();
    assert_eq!(found, vec![Twist::from_edge_values(&graph, &make(-1)).unwrap()]);
}

#[test]
fn rational_bridge_both_points() {
    // C1, C2 elliptic; E rational carrying both markings
    let graph = StableGraph::new(vec![1, 1, 0], vec![2, 2], vec![(0, 1), (0, 2), (1, 2)]).unwrap();
    let make = |a: i64| vec![(0, -2 - a), (1, a), (2, -4 - a)];
    assert_eq!(valid_values(&graph, make), vec![-3, -2, -1]);
    assert_eq!(enumerate_twists_general(&graph, &[2, 2], 1).unwrap().len(), 3);
    // coefficients I + 1 of the twisted divisor on a component: a = −3 gives
    // 2x2 − 2x1' on C1, a = −1 gives 2x2 − 2x1'' on C2
    let coeff = |a: i64, e: usize, v: usize| {
        Twist::from_edge_values(&graph, &make(a)).unwrap().value_at(&graph, e, v).unwrap() + 1
    };
    assert_eq!((coeff(-3, 1, 0), coeff(-3, 0, 0)), (-2, 2));
    assert_eq!((coeff(-1, 2, 1), coeff(-1, 0, 1)), (-2, 2));
    assert_eq!((coeff(-2, 1, 0), coeff(-2, 0, 0)), (-1, 1));
}

#[test]
fn trees_only_need_balancing() {
    for (g, n) in [(0, 5), (1, 3), (2, 2)] {
        for gr in enumerate_stable_graphs(g, n).unwrap() {
            if gr.h1() > 0 {
                continue;
            }
            for shift in -2..=2 {
                let values: Vec<(usize, i64)> = (0..gr.num_edges()).map(|e| (e, shift * (e as i64 + 1) - 1)).collect();
                let t = Twist::from_edge_values(&gr, &values).unwrap();
                assert!(validate_twist(&gr, &t).unwrap().is_valid());
            }
            if gr.num_edges() > 0 {
                let mut raw = Twist::from_edge_values(&gr, &[(0, 1)]).unwrap().values().clone();
                *raw.get_mut(&gr.side(0, 1)).unwrap() = 5;
                for e in 1..gr.num_edges() {
                    raw.insert(gr.side(e, 0), 0);
                    raw.insert(gr.side(e, 1), 0);
                }
                assert_eq!(
                    validate_twist(&gr, &Twist::new(raw)).unwrap(),
                    TwistVerdict::Violated(Violation::Balancing { edge: 0 })
                );
            }
        }
    }
}

fn brute_force(graph: &StableGraph, mu: &[i64], k: i64) -> BTreeSet<Twist> {
    let targets = twist_targets(graph, mu, k);
    let basic: Vec<usize> = (0..graph.num_edges()).filter(|&e| !graph.is_self_edge(e)).collect();
    let bound: i64 = targets.iter().map(|t| t.abs()).sum::<i64>() + 1;
    let mut out = BTreeSet::new();
    let width = (2 * bound + 1) as usize;
    let total = width.pow(basic.len() as u32);
    for code in 0..total {
        let mut c = code;
        let values: Vec<(usize, i64)> = basic
            .iter()
            .map(|&e| {
                let x = (c % width) as i64 - bound;
                c /= width;
                (e, x)
            })
            .collect();
        let t = Twist::from_edge_values(graph, &values).unwrap();
        let mut sums = vec![0; graph.num_vertices()];
        for (&h, &x) in t.values() {
            sums[graph.vertex_of(h)] += x;
        }
        if sums == targets && validate_twist(graph, &t).unwrap().is_valid() {
            out.insert(t);
        }
    }
    out
}

fn agree(g: u32, mu: &[i64], k: i64) {
    for gr in enumerate_stable_graphs(g, mu.len()).unwrap() {
        let basic = (0..gr.num_edges()).filter(|&e| !gr.is_self_edge(e)).count();
        if basic > 3 {
            continue;
        }
        let found: BTreeSet<Twist> = enumerate_twists_general(&gr, mu, k).unwrap().into_iter().collect();
        assert_eq!(found, brute_force(&gr, mu, k), "{gr} μ = {mu:?} k = {k}");
    }
}

#[test]
fn general_enumeration_matches_brute_force() {
    for (g, mu, k) in [
        (1, vec![0, 0], 1),
        (1, vec![1, -1], 1),
        (1, vec![2, -1, -1], 1),
        (2, vec![2], 1),
        (2, vec![1, 1], 1),
        (2, vec![3, -1], 1),
        (2, vec![2, 0], 1),
        (2, vec![4], 2),
        (1, vec![1, -1], 2),
    ] {
        agree(g, &mu, k);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn random_multidegrees_match_brute_force(g in 1u32..3, head in prop::collection::vec(-3i64..4, 0..2)) {
        let mut mu = head.clone();
        mu.push(2 * g as i64 - 2 - head.iter().sum::<i64>());
        prop_assume!(2 * g as usize + mu.len() > 2);
        agree(g, &mu, 1);
    }
}

fn star(genera: Vec<u32>, legs: Vec<usize>, edges: Vec<(usize, usize)>) -> StarGraph {
    StarGraph::new(StableGraph::new(genera, legs, edges).unwrap(), 0).unwrap()
}

#[test]
fn star_twist_examples() {
    let mu = [3, -1];
    let trivial = star(vec![2], vec![0, 0], vec![]);
    assert_eq!(enumerate_star_twists(&trivial, &mu).unwrap(), vec![Twist::default()]);
    let single = star(vec![0, 2], vec![0, 0], vec![(0, 1)]);
    let tw = enumerate_star_twists(&single, &mu).unwrap();
    assert_eq!(tw.len(), 1);
    assert_eq!(star_edge_values(&single, &tw[0]), vec![3]);
    let banana = star(vec![0, 1], vec![0, 0], vec![(0, 1), (0, 1)]);
    let tw = enumerate_star_twists(&banana, &mu).unwrap();
    assert_eq!(tw.iter().map(|t| star_edge_values(&banana, t)).collect::<Vec<_>>(), vec![vec![1, 1]]);
    let elliptic = star(vec![1, 1], vec![0, 0], vec![(0, 1)]);
    let tw = enumerate_star_twists(&elliptic, &mu).unwrap();
    assert_eq!(tw.iter().map(|t| star_edge_values(&elliptic, t)).collect::<Vec<_>>(), vec![vec![1]]);
    // general enumeration with k = 1 finds the same twist on these shapes
    let general = enumerate_twists_general(&banana.graph, &mu, 1).unwrap();
    assert_eq!(general.len(), 1);
    assert_eq!(general[0].value_at(&banana.graph, 0, 0), Some(1));
}

#[test]
fn star_twists_agree_with_general() {
    for (g, mu) in [(2, vec![3, -1]), (2, vec![2, 1, -1]), (1, vec![2, -1, -1]), (2, vec![4, -1, -1])] {
        for s in enumerate_simple_star_graphs(g, &mu, true, StarFilter::All).unwrap() {
            let from_star: BTreeSet<Vec<i64>> = enumerate_star_twists(&s, &mu)
                .unwrap()
                .iter()
                .map(|t| star_edge_values(&s, t))
                .collect();
            let from_general: BTreeSet<Vec<i64>> = enumerate_twists_general(&s.graph, &mu, 1)
                .unwrap()
                .iter()
                .map(|t| (0..s.graph.num_edges()).map(|e| t.value_at(&s.graph, e, s.center).unwrap()).collect::<Vec<_>>())
                .filter(|v| v.iter().all(|&x| x > 0))
                .collect();
            assert_eq!(from_star, from_general, "{s}");
            for values in &from_star {
                assert!(values.iter().all(|&x| x >= 1));
                for v in 0..s.graph.num_vertices() {
                    let mut parts = s.parts_at(&mu, v);
                    for (e, &(a, b)) in s.graph.edges().iter().enumerate() {
                        if v == s.center && (a == v || b == v) {
                            parts.push(-values[e] - 1);
                        } else if v != s.center && (a == v || b == v) {
                            parts.push(values[e] - 1);
                        }
                    }
                    assert_eq!(parts.iter().sum::<i64>(), 2 * s.graph.genera()[v] as i64 - 2, "{s}");
                }
            }
        }
    }
}

#[test]
fn unique_twists_for_three_minus_one() {
    for s in enumerate_simple_star_graphs(2, &[3, -1], true, StarFilter::Contributing).unwrap() {
        assert_eq!(enumerate_star_twists(&s, &[3, -1]).unwrap().len(), 1, "{s}");
    }
}
