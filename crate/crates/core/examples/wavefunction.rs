//! Normalized spinor of two modes of the worked well.
//!
//! cargo run --example wavefunction

use zero_modes::analytic::{normalized_spinor_samples, spinor_value, zero_mode, KySign};
use zero_modes::model::PotentialParams;
use zero_modes::numeric::{dirac_residual, Grid};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = PotentialParams::new(4.0, 1.0)?;
    let fine = Grid::default_verification();
    for n in [0, 3] {
        let m = zero_mode(p, n)?;
        let (samples, raw_norm) = normalized_spinor_samples(p, &m, KySign::Plus, &fine)?;
        println!("n = {n}, ky = {:.6}, raw norm {raw_norm:.6}", m.ky);
        println!("  Dirac residual on [-25, 25]: {:.2e}", dirac_residual(p, m.ky, &samples)?);
        println!("  {:>6}  {:>12}  {:>12}", "x", "|psi_A|^2", "|psi_B|^2");
        for x in Grid::new(-6.0, 6.0, 13)?.points() {
            let s = spinor_value(p, &m, KySign::Plus, x)?.scaled(1.0 / raw_norm);
            println!("  {x:>6.2}  {:>12.6}  {:>12.6}", s.psi_a.norm_sqr(), s.psi_b.norm_sqr());
        }
    }
    Ok(())
}
