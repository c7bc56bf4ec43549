//! The three-component twist system of a genus-3 curve with `μ = (2, 2)`:
//! two elliptic components `C1`, `C2` and a rational bridge `E`.
//!
//! Scans the free parameter `a = I(x', C1)` and prints which values pass the
//! twist axioms, then lists the twists found by the general enumerator.

use tautring::graph::StableGraph;
use tautring::twist::{component_digraph, enumerate_twists_general, validate_twist, Twist, TwistVerdict};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // vertices C1, C2, E; edges x2 = C1-C2, x1' = C1-E, x1'' = C2-E
    let graph = StableGraph::new(vec![1, 1, 0], vec![2, 0], vec![(0, 1), (0, 2), (1, 2)])?;
    let mu = [2, 2];
    for a in -5..=5 {
        let twist = Twist::from_edge_values(&graph, &[(0, -a), (1, a), (2, -2 - a)])?;
        match validate_twist(&graph, &twist)? {
            TwistVerdict::Valid => {
                let dg = component_digraph(&graph, &twist)?;
                println!("a = {a:>2}: valid, {} classes", dg.num_classes());
            }
            TwistVerdict::Violated(v) => println!("a = {a:>2}: {} fails ({v:?})", v.axiom()),
        }
    }
    for t in enumerate_twists_general(&graph, &mu, 1)? {
        let values: Vec<_> = (0..graph.num_edges()).map(|e| t.edge_value(&graph, e)).collect();
        println!("enumerated: {values:?}");
    }
    Ok(())
}
