//! Pixton's cycle `P^d_{g,μ}` by interpolation in `r`, printed in the class
//! file format.
//!
//! Usage: `cargo run --release --example pixton_cycle -- 1 2,-1,-1 1`

use tautring::format::class_to_string;
use tautring::pixton::{pixton_class, PixtonOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let g: u32 = args.first().map(|s| s.parse()).transpose()?.unwrap_or(1);
    let mu: Vec<i64> = match args.get(1) {
        Some(s) => s.split(',').map(|x| x.trim().parse()).collect::<Result<_, _>>()?,
        None => vec![2, -1, -1],
    };
    let d: usize = args.get(2).map(|s| s.parse()).transpose()?.unwrap_or(g as usize);
    let report = pixton_class(g, &mu, d, &PixtonOptions::default())?;
    eprintln!("sampled r = {:?}, held out {:?}", report.samples, report.holdout);
    print!("{}", class_to_string(&report.class));
    Ok(())
}
