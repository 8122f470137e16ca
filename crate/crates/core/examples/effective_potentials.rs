//! The decoupled Schrödinger potentials, their Scarf II parameter sets and
//! PT symmetry at mu = 0.
//!
//! cargo run --example effective_potentials

use num_complex::Complex64;
use zero_modes::model::{
    effective_potential, effective_potential_from_well, scarf_parameters, scarf_potential_value, Branch,
    PotentialParams,
};

fn show(z: Complex64) -> String {
    format!("{:.3}{:+.3}i", z.re + 0.0, z.im + 0.0)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = PotentialParams::new(4.0, 1.0)?;
    let ky = 2.0;
    for br in [Branch::Plus, Branch::Minus] {
        println!("{br:?} branch at x = 0.7: {}", show(effective_potential(p, br, ky, 0.7)));
        for s in scarf_parameters(p, br) {
            let worst = (-200..=200)
                .map(|i| {
                    let x = i as f64 * 0.05;
                    let rebuilt = scarf_potential_value(s, x) + (ky * ky - p.mu * p.mu);
                    (rebuilt - effective_potential_from_well(p, br, ky, x)).norm()
                })
                .fold(0.0, f64::max);
            println!("  case {:?}: A = {}, B = {}, max mismatch {worst:.1e}", s.case, show(s.a), show(s.b));
        }
    }

    let pt_defect = |p: PotentialParams| {
        (-400..=400)
            .map(|i| {
                let x = i as f64 * 0.05;
                let v: Complex64 = effective_potential(p, Branch::Plus, ky, x);
                (effective_potential(p, Branch::Plus, ky, -x).conj() - v).norm()
            })
            .fold(0.0, f64::max)
    };
    println!("\nmax |conj V1(-x) - V1(x)|:");
    println!("  mu = 0: {:.1e}", pt_defect(p.without_asymmetry()));
    println!("  mu = 1: {:.4}", pt_defect(p));
    Ok(())
}
