//! Zero-energy bound states of graphene in the electrostatic well
//! `V(x) = -lambda sech x + mu tanh x`.
//!
//! - [`model`]: the well, its effective Schrödinger potentials and their
//!   complex Scarf II parameterizations.
//! - [`specfun`]: Jacobi polynomials with complex parameters and the
//!   hyperbolic helpers the closed forms need.
//! - [`analytic`]: the closed-form spectrum and spinors.
//! - [`numeric`]: residuals, a shooting solver that works from `V(x)` alone,
//!   quadrature and decay fits.
//! - [`cli`]: the `zero-modes` command line and its CSV/JSON output.
//!
//! ```
//! use zero_modes::analytic::zero_mode_spectrum;
//! use zero_modes::model::PotentialParams;
//!
//! let p = PotentialParams::new(4.0, 1.0).unwrap();
//! let ky: Vec<f64> = zero_mode_spectrum(p).unwrap().iter().map(|m| m.ky).collect();
//! assert_eq!(ky.len(), 4);
//! assert!((ky[0] - 13.25f64.sqrt()).abs() < 1e-12);
//! ```

pub mod analytic;
pub mod cli;
pub mod error;
pub mod model;
pub mod numeric;
pub mod specfun;
