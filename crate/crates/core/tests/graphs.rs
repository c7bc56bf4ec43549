use num_rational::BigRational;
use proptest::prelude::*;

use tautring::graph::{canonical_form, enumerate_simple_star_graphs, enumerate_stable_graphs, StableGraph, StarFilter};

#[test]
fn counts() {
    assert_eq!(enumerate_stable_graphs(0, 3).unwrap().len(), 1);
    assert_eq!(enumerate_stable_graphs(0, 4).unwrap().len(), 4);
    assert_eq!(enumerate_stable_graphs(1, 1).unwrap().len(), 2);
    assert!(enumerate_stable_graphs(0, 2).is_err());
    assert!(enumerate_stable_graphs(1, 0).is_err());
}

#[test]
fn one_smooth_graph_each() {
    for (g, n) in [(0, 3), (0, 4), (0, 5), (0, 6), (0, 7), (1, 1), (1, 2), (1, 3), (1, 4), (2, 0), (2, 1)] {
        let graphs = enumerate_stable_graphs(g, n).unwrap();
        assert_eq!(graphs.iter().filter(|gr| gr.num_edges() == 0).count(), 1, "({g}, {n})");
        for gr in &graphs {
            assert_eq!(gr.genus(), g);
            assert!(gr.is_stable() && gr.is_connected());
        }
    }
}

#[test]
fn enumeration_is_deterministic() {
    let mass = |g, n| -> BigRational {
        enumerate_stable_graphs(g, n)
            .unwrap()
            .iter()
            .map(|gr| BigRational::new(1.into(), gr.automorphism_order().into()))
            .sum()
    };
    for (g, n) in [(1, 2), (2, 1), (0, 6)] {
        assert_eq!(mass(g, n), mass(g, n));
        assert_eq!(enumerate_stable_graphs(g, n).unwrap(), enumerate_stable_graphs(g, n).unwrap());
    }
}

#[test]
fn automorphism_orders() {
    assert_eq!(StableGraph::trivial(2, 3).automorphism_order(), 1);
    let banana = StableGraph::new(vec![0, 1], vec![0, 0], vec![(0, 1), (0, 1)]).unwrap();
    assert_eq!(banana.automorphism_order(), 2);
    let cherries = StableGraph::new(vec![0, 1, 1], vec![0, 0], vec![(0, 1), (0, 2)]).unwrap();
    assert_eq!(cherries.automorphism_order(), 2);
    let loop11 = StableGraph::new(vec![0], vec![0], vec![(0, 0)]).unwrap();
    assert_eq!(loop11.automorphism_order(), 2);
}

#[test]
fn banana_presentations_agree() {
    let a = StableGraph::new(vec![0, 0], vec![0, 1], vec![(0, 1), (0, 1)]).unwrap();
    let b = StableGraph::new(vec![0, 0], vec![1, 0], vec![(1, 0), (0, 1)]).unwrap();
    assert_eq!(canonical_form(&a).graph, canonical_form(&b).graph);
}

#[test]
fn star_graphs_are_stable_graphs() {
    for (g, mu) in [(2, vec![3, -1]), (1, vec![2, -1, -1]), (2, vec![2, 1, -1])] {
        let all = enumerate_stable_graphs(g, mu.len()).unwrap();
        for s in enumerate_simple_star_graphs(g, &mu, true, StarFilter::All).unwrap() {
            assert!(all.iter().any(|gr| gr.is_isomorphic(&s.graph)), "{s}");
        }
    }
}

#[test]
fn genus_zero_stars() {
    let mu = [1, 1, -2, -2];
    let contributing = enumerate_simple_star_graphs(0, &mu, true, StarFilter::Contributing).unwrap();
    assert_eq!(contributing.len(), 1);
    assert!(contributing[0].is_trivial());
    let all = enumerate_simple_star_graphs(0, &mu, true, StarFilter::All).unwrap();
    assert!(all.len() > 1);
    assert!(enumerate_simple_star_graphs(1, &[0, 0], true, StarFilter::All).is_err());
}

/// Applies a vertex permutation, an edge permutation and side flips.
fn scramble(gr: &StableGraph, vseed: &[usize], eseed: &[usize], flips: &[bool]) -> StableGraph {
    let nv = gr.num_vertices();
    let mut vperm: Vec<usize> = (0..nv).collect();
    for i in (1..nv).rev() {
        vperm.swap(i, vseed[i % vseed.len()] % (i + 1));
    }
    let mut genera = vec![0; nv];
    for v in 0..nv {
        genera[vperm[v]] = gr.genera()[v];
    }
    let legs = gr.legs().iter().map(|&v| vperm[v]).collect();
    let mut edges: Vec<(usize, usize)> = gr
        .edges()
        .iter()
        .enumerate()
        .map(|(e, &(a, b))| {
            let (a, b) = (vperm[a], vperm[b]);
            if flips[e % flips.len()] {
                (b, a)
            } else {
                (a, b)
            }
        })
        .collect();
    for i in (1..edges.len()).rev() {
        edges.swap(i, eseed[i % eseed.len()] % (i + 1));
    }
    StableGraph::new(genera, legs, edges).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn canonical_form_is_idempotent(
        amb in 0usize..5,
        idx in 0usize..1000,
        vseed in prop::collection::vec(0usize..100, 1..6),
        eseed in prop::collection::vec(0usize..100, 1..6),
        flips in prop::collection::vec(any::<bool>(), 1..6),
    ) {
        let (g, n) = [(1, 1), (1, 3), (2, 0), (2, 1), (0, 6)][amb];
        let graphs = enumerate_stable_graphs(g, n).unwrap();
        let gr = &graphs[idx % graphs.len()];
        let moved = scramble(gr, &vseed, &eseed, &flips);
        let c = canonical_form(&moved).graph;
        prop_assert_eq!(&c, &canonical_form(gr).graph);
        prop_assert_eq!(&canonical_form(&c).graph, &c);
        prop_assert_eq!(moved.automorphism_order(), gr.automorphism_order());
    }
}
