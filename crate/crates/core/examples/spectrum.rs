//! Zero-mode momenta of an electron well and its hole mirror.
//!
//! cargo run --example spectrum -- 4 1

use zero_modes::analytic::{mode_bound, zero_mode_spectrum};
use zero_modes::model::PotentialParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<f64> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let (lambda, mu) = match args[..] {
        [l, m] => (l, m),
        _ => (4.0, 1.0),
    };
    for p in [PotentialParams::new(lambda, mu)?, PotentialParams::new(-lambda, mu)?] {
        let modes = zero_mode_spectrum(p)?;
        println!(
            "lambda = {}, mu = {}: {} ({} modes, n < {})",
            p.lambda,
            p.mu,
            p.regime(),
            modes.len(),
            mode_bound(p)
        );
        for m in modes {
            println!("  n = {}  ky = {:.10}  kappa = {}", m.n, m.ky, m.kappa);
        }
    }
    Ok(())
}
