//! The shooting solver recovers the momenta from the well alone.
//!
//! cargo run --release --example shooting_oracle

use std::time::Instant;

use zero_modes::analytic::zero_mode_spectrum;
use zero_modes::model::PotentialParams;
use zero_modes::numeric::{shoot_spectrum, Grid, Shooter};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = Grid::with_spacing(-25.0, 25.0, 0.001)?;
    for (lambda, mu) in [(4.0, 1.0), (-4.0, 1.0), (2.5, 0.0), (0.4, 1.0)] {
        let p = PotentialParams::new(lambda, mu)?;
        let start = Instant::now();
        let roots = shoot_spectrum(p, lambda.abs() + mu.abs(), &grid, 1e-10)?;
        let mut exact: Vec<f64> = zero_mode_spectrum(p)?.iter().map(|m| m.ky).collect();
        exact.sort_by(f64::total_cmp);
        println!("lambda = {lambda}, mu = {mu}: {} roots in {:.2?}", roots.len(), start.elapsed());
        for (r, m) in roots.iter().zip(&exact) {
            println!(
                "  ky = {:.10}  closed form {:.10}  |diff| {:.1e}  |W| {:.1e}  bisections {}",
                r.ky,
                m,
                (r.ky - m).abs(),
                r.matching_residual,
                r.iterations
            );
        }
    }

    // the matching function changes sign at each root
    let p = PotentialParams::new(4.0, 1.0)?;
    let shooter = Shooter::new(p, &Grid::with_spacing(-25.0, 25.0, 0.01)?)?;
    println!("\nW(ky) for lambda = 4, mu = 1:");
    for i in 0..=16 {
        let ky = 1.05 + 0.18 * i as f64;
        println!("  {ky:.2}  {:+.6}", shooter.matching_function(ky));
    }
    Ok(())
}
