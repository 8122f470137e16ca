//! The confining well `V(x) = -lambda sech x + mu tanh x` and the complex
//! Schrödinger potentials its zero modes obey.
//!
//! Decoupling the Dirac system with `psi_{1,2} = psi_A ± psi_B` gives
//!
//! ```text
//! V_{1,2}(x) = -V(x)^2 ∓ i V'(x) + ky^2
//!            = (mu^2 ∓ i mu - lambda^2) sech^2 x + lambda (2 mu ∓ i) sech x tanh x + ky^2 - mu^2
//! ```
//!
//! which is a complex Scarf II potential
//! `U_S(x) = -(B^2 + A^2 + A) sech^2 x + i B (2A + 1) sech x tanh x` shifted by
//! `ky^2 - mu^2`. For `mu != 0` neither branch is PT symmetric.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Depth `lambda` and asymmetry `mu` of the well (dimensionless).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialParams {
    pub lambda: f64,
    pub mu: f64,
}

impl PotentialParams {
    pub fn new(lambda: f64, mu: f64) -> Result<Self> {
        if !lambda.is_finite() || !mu.is_finite() {
            return Err(Error::InvalidParams(format!(
                "lambda and mu must be finite (got {lambda}, {mu})"
            )));
        }
        Ok(Self { lambda, mu })
    }

    /// The symmetric well `-lambda sech x` obtained by dropping the tanh term.
    pub fn without_asymmetry(self) -> Self {
        Self { mu: 0.0, ..self }
    }

    pub fn regime(&self) -> Regime {
        classify_regime(*self)
    }
}

/// Which decoupled component: `Plus` is `V_1` (acts on `psi_A + psi_B`),
/// `Minus` is `V_2` (acts on `psi_A - psi_B`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    /// +1 for `Plus`, -1 for `Minus`.
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    /// `lambda > 1/2`: the well binds electrons.
    ElectronBound,
    /// `lambda < -1/2`: the well binds holes.
    HoleBound,
    /// `0 < |lambda| <= 1/2`.
    NoBoundStates,
    /// `lambda == 0`.
    Invalid,
}

impl Regime {
    pub fn has_bound_states(self) -> bool {
        matches!(self, Regime::ElectronBound | Regime::HoleBound)
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Label of the four ways the effective potential matches the Scarf II form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScarfCase {
    /// `A = lambda - 1/2, B = -1/2 - i mu` (electron bound states).
    A,
    /// `A = -lambda - 1/2, B = 1/2 + i mu` (hole bound states).
    B,
    /// `A = i mu, B = -lambda`.
    C,
    /// `A = -1 - i mu, B = lambda`; never normalizable.
    D,
}

/// Complex Scarf II parameters `(A, B)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScarfParams {
    pub a: Complex64,
    pub b: Complex64,
    pub case: ScarfCase,
}

/// `-lambda sech x + mu tanh x`.
pub fn potential_value(p: PotentialParams, x: f64) -> f64 {
    -p.lambda / x.cosh() + p.mu * x.tanh()
}

/// `dV/dx = lambda sech x tanh x + mu sech^2 x`.
pub fn potential_derivative(p: PotentialParams, x: f64) -> f64 {
    let sech = 1.0 / x.cosh();
    p.lambda * sech * x.tanh() + p.mu * sech * sech
}

/// Closed form of `V_{1,2}` in terms of sech^2 and sech·tanh.
pub fn effective_potential(p: PotentialParams, br: Branch, ky: f64, x: f64) -> Complex64 {
    let PotentialParams { lambda, mu } = p;
    let s = br.sign();
    let sech = 1.0 / x.cosh();
    let tanh = x.tanh();
    let c2 = Complex64::new(mu * mu - lambda * lambda, -s * mu);
    let c1 = lambda * Complex64::new(2.0 * mu, -s);
    c2 * sech * sech + c1 * sech * tanh + (ky * ky - mu * mu)
}

/// `-V^2 ∓ i V' + ky^2`, built from the well itself.
pub fn effective_potential_from_well(p: PotentialParams, br: Branch, ky: f64, x: f64) -> Complex64 {
    let v = potential_value(p, x);
    let dv = potential_derivative(p, x);
    Complex64::new(ky * ky - v * v, -br.sign() * dv)
}

/// `-(B^2 + A^2 + A) sech^2 x + i B (2A + 1) sech x tanh x`.
pub fn scarf_potential_value(s: ScarfParams, x: f64) -> Complex64 {
    let ScarfParams { a, b, .. } = s;
    let sech = 1.0 / x.cosh();
    -(b * b + a * a + a) * sech * sech + I * b * (2.0 * a + 1.0) * sech * x.tanh()
}

/// All four Scarf II parameter sets reproducing the branch potential up to
/// the constant `ky^2 - mu^2`. No admissibility filtering.
///
/// For `Minus` the sets are `(conj A, -conj B)`: since `V_2 = conj(V_1)` and
/// `conj(U_S(A, B)) = U_S(conj A, -conj B)`.
pub fn scarf_parameters(p: PotentialParams, br: Branch) -> [ScarfParams; 4] {
    let PotentialParams { lambda, mu } = p;
    let c = Complex64::new;
    let plus = [
        ScarfParams { a: c(lambda - 0.5, 0.0), b: c(-0.5, -mu), case: ScarfCase::A },
        ScarfParams { a: c(-lambda - 0.5, 0.0), b: c(0.5, mu), case: ScarfCase::B },
        ScarfParams { a: c(0.0, mu), b: c(-lambda, 0.0), case: ScarfCase::C },
        ScarfParams { a: c(-1.0, -mu), b: c(lambda, 0.0), case: ScarfCase::D },
    ];
    match br {
        Branch::Plus => plus,
        Branch::Minus => plus.map(|s| ScarfParams {
            a: s.a.conj(),
            b: -s.b.conj(),
            case: s.case,
        }),
    }
}

/// Electron wells need `lambda > 1/2`, hole wells `lambda < -1/2`; both
/// boundaries are excluded.
pub fn classify_regime(p: PotentialParams) -> Regime {
    let l = p.lambda;
    if l == 0.0 {
        Regime::Invalid
    } else if l > 0.5 {
        Regime::ElectronBound
    } else if l < -0.5 {
        Regime::HoleBound
    } else {
        Regime::NoBoundStates
    }
}
