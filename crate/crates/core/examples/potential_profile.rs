//! CSV of V(x) and the symmetric well obtained at mu = 0, ready to plot.
//!
//! cargo run --example potential_profile > profile.csv

use zero_modes::model::{potential_value, PotentialParams};
use zero_modes::numeric::Grid;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = PotentialParams::new(4.0, 1.0)?;
    let tilde = p.without_asymmetry();
    println!("x,V,V_tilde");
    for x in Grid::new(-8.0, 8.0, 161)?.points() {
        println!("{x:.2},{:.8},{:.8}", potential_value(p, x), potential_value(tilde, x));
    }
    Ok(())
}
