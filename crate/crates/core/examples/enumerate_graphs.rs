//! Stable graphs of `G_{g,n}` with their automorphism orders.
//!
//! Usage: `cargo run --example enumerate_graphs -- 1 2`

use num_rational::BigRational;
use tautring::graph::enumerate_stable_graphs;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let g: u32 = args.first().map(|s| s.parse()).transpose()?.unwrap_or(1);
    let n: usize = args.get(1).map(|s| s.parse()).transpose()?.unwrap_or(2);
    let graphs = enumerate_stable_graphs(g, n)?;
    let mut mass = BigRational::from_integer(0.into());
    for gr in &graphs {
        let aut = gr.automorphism_order();
        mass += BigRational::new(1.into(), aut.into());
        println!("{:>2} edges  |Aut| = {aut:<2} {gr}", gr.num_edges());
    }
    println!("{} graphs in G_{{{g},{n}}}, sum of 1/|Aut| = {mass}", graphs.len());
    Ok(())
}
