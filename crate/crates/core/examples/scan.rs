//! Mode counts across the (lambda, mu) plane, computed in parallel.
//!
//! cargo run --example scan

use rayon::prelude::*;
use zero_modes::analytic::zero_mode_count;
use zero_modes::model::PotentialParams;

fn main() {
    let lambdas: Vec<f64> = (-12..=12).map(|i| i as f64 * 0.25).collect();
    let mus = [0.0, 1.0, 2.0];
    let counts: Vec<Vec<usize>> = lambdas
        .par_iter()
        .map(|&l| mus.iter().map(|&m| zero_mode_count(PotentialParams::new(l, m).unwrap())).collect())
        .collect();
    println!("{:>7}  {}", "lambda", mus.map(|m| format!("mu={m:<3}")).join(" "));
    for (l, row) in lambdas.iter().zip(counts) {
        let cells: Vec<String> = row.iter().map(|c| format!("{c:>6}")).collect();
        println!("{l:>7.2}  {}", cells.join(" "));
    }
}
