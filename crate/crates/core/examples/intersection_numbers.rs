//! Intersection numbers of ψ and κ classes, and the pairing certificate.
//!
//! Usage: `cargo run --example intersection_numbers -- 2 1,2,3`

use tautring::graph::StableGraph;
use tautring::intersect::{equals_pairing, kappa_psi_integral, psi_integral};
use tautring::strata::TautClass;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let g: u32 = args.first().map(|s| s.parse()).transpose()?.unwrap_or(2);
    let exps: Vec<u32> = match args.get(1) {
        Some(s) => s.split(',').map(|x| x.trim().parse()).collect::<Result<_, _>>()?,
        None => vec![2, 2, 2],
    };
    println!("<{exps:?}>_{g} = {}", psi_integral(g, &exps)?);
    println!("int_(1,1) kappa_1 = {}", kappa_psi_integral(1, 1, &[1], &[0])?);
    println!("int_(0,4) kappa_1 = {}", kappa_psi_integral(0, 4, &[1], &[0, 0, 0, 0])?);
    println!("int_(2,0) kappa_3 = {}", kappa_psi_integral(2, 0, &[3], &[])?);

    let psi1 = TautClass::psi(0, 4, 0, 1)?;
    let d = TautClass::boundary(StableGraph::new(vec![0, 0], vec![0, 0, 1, 1], vec![(0, 1)])?)?;
    println!("psi_1 vs D_12|34 on M_0,4: {}", equals_pairing(&psi1, &d, 1)?.label());
    println!("psi_1 vs 2 psi_1 on M_0,4: {}", equals_pairing(&psi1, &psi1.add(&psi1)?, 1)?.label());
    Ok(())
}
