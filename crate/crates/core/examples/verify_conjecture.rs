//! Compares the star-graph side of `H_{g,μ}` with `2^{−g} P^g_{g,μ}`.
//!
//! Usage: `cargo run --release --example verify_conjecture -- 1 2,-1,-1`

use std::time::Instant;

use tautring::hclass::verify_conjecture_a;
use tautring::pixton::PixtonOptions;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let g: u32 = args.first().map(|s| s.parse()).transpose()?.unwrap_or(1);
    let mu: Vec<i64> = match args.get(1) {
        Some(s) => s.split(',').map(|x| x.trim().parse()).collect::<Result<_, _>>()?,
        None => vec![2, -1, -1],
    };
    let start = Instant::now();
    let report = verify_conjecture_a(g, &mu, &PixtonOptions::default(), None)?;
    println!("g = {g}, mu = {mu:?}");
    println!("star side conjecture-free: {}", report.conjecture_free);
    for t in &report.terms {
        println!("  {}  I = {:?}  |Aut| = {}  coefficient {}", t.star, t.twist, t.aut, t.coefficient);
    }
    println!(
        "{} generators, {} nonzero pairings, interpolation at r = {:?}",
        report.pairing.generators.len(),
        report.nonzero_pairings(),
        report.samples
    );
    println!("verdict: {}", report.pairing.verdict.label());
    println!("elapsed: {:.2?}", start.elapsed());
    Ok(())
}
