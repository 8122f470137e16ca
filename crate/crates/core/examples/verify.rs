//! Every consistency check for a few wells, with the fast and strict presets.
//!
//! cargo run --release --example verify

use zero_modes::cli::{verification_checks, Profile};
use zero_modes::model::PotentialParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (lambda, mu) in [(4.0, 1.0), (-2.5, 0.5), (1.0, 0.0), (0.4, 1.0)] {
        let p = PotentialParams::new(lambda, mu)?;
        for profile in [Profile::Fast, Profile::Strict] {
            let checks = verification_checks(p, &profile.settings())?;
            let failed: Vec<_> = checks.iter().filter(|c| !c.passed()).collect();
            println!("lambda = {lambda}, mu = {mu}, {profile:?}: {} checks, {} failed", checks.len(), failed.len());
            for c in failed {
                println!("  FAIL {}: {:e} vs {:e}", c.name, c.measured, c.tolerance);
            }
        }
    }
    Ok(())
}
