//! Simple star graphs of `(g, μ)` and their twists.
//!
//! Usage: `cargo run --example star_graphs -- 2 2,1,-1`

use tautring::graph::{enumerate_simple_star_graphs, StarFilter};
use tautring::twist::{enumerate_star_twists, star_edge_values};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let g: u32 = args.first().map(|s| s.parse()).transpose()?.unwrap_or(2);
    let mu: Vec<i64> = match args.get(1) {
        Some(s) => s.split(',').map(|x| x.trim().parse()).collect::<Result<_, _>>()?,
        None => vec![3, -1],
    };
    let meromorphic = mu.iter().any(|&m| m < 0);
    for filter in [StarFilter::All, StarFilter::Contributing] {
        let stars = enumerate_simple_star_graphs(g, &mu, meromorphic, filter)?;
        println!("{filter:?}: {} star graphs", stars.len());
        for s in &stars {
            let twists: Vec<Vec<i64>> = enumerate_star_twists(s, &mu)?
                .iter()
                .map(|t| star_edge_values(s, t))
                .collect();
            println!("  {s}  |Aut| = {}  Tw = {twists:?}", s.automorphism_order());
        }
    }
    Ok(())
}
