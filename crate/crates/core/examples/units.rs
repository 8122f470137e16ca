//! Physical energies and momenta for a well of width 10 nm.
//!
//! cargo run --example units

use zero_modes::analytic::zero_mode_spectrum;
use zero_modes::cli::convert_units;
use zero_modes::model::PotentialParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let width_nm = 10.0;
    let p = PotentialParams::new(4.0, 1.0)?;
    println!("lambda = 4, mu = 1, length unit {width_nm} nm");
    for m in zero_mode_spectrum(p)? {
        let (e_mev, ky_nm) = convert_units(m.ky, width_nm)?;
        println!("  n = {}: ky = {ky_nm:.6} 1/nm, hbar v_F ky = {e_mev:.3} meV", m.n);
    }
    Ok(())
}
