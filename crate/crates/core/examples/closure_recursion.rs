//! Runs the closure recursion for `[H̄_2(3, −1)]` from `2^{−2} P²` and checks
//! that the result vanishes under every pairing, as a single simple pole
//! forces.

use std::time::Instant;

use tautring::hclass::{ClosureEngine, HMode};
use tautring::intersect::{compare_by_pairing, evaluate};
use tautring::pixton::PixtonOptions;
use tautring::strata::TautClass;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let start = Instant::now();
    let engine = ClosureEngine::new(HMode::Pixton, PixtonOptions::default());

    let weierstrass = engine.closure_class(2, &[2])?;
    println!("[H(2)] on M_2,1 has {} terms ({:.2?})", weierstrass.len(), start.elapsed());
    let psi = TautClass::psi(2, 1, 0, 3)?;
    let w = tautring::strata::multiply(&weierstrass, &psi)?;
    println!("  integral against psi^3: {}", evaluate(&w)?);

    let x = engine.closure_by_formula(2, &[3, -1])?;
    println!("formula for [H(3,-1)] has {} terms ({:.2?})", x.len(), start.elapsed());
    let zero = TautClass::zero(2, 2);
    let report = compare_by_pairing(&x, &zero, 2)?;
    println!(
        "{} complementary generators: {} ({:.2?})",
        report.generators.len(),
        report.verdict.label(),
        start.elapsed()
    );
    Ok(())
}
