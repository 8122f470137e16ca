//! Closed-form zero-energy modes.
//!
//! At `E = 0` the decoupled components `psi_1 = psi_A + psi_B` and
//! `psi_2 = psi_A - psi_B` are linked by
//!
//! ```text
//! (V - i d/dx) psi_1 + i ky psi_2 = 0
//! (V + i d/dx) psi_2 - i ky psi_1 = 0
//! ```
//!
//! and `psi_1` is a Scarf II eigenfunction. Every component used here has the
//! shape `c (sech x)^p exp(q atan(sinh x)) P_n^{(a,b)}(i sinh x)`, so values
//! and first and second derivatives are all available in closed form.
//!
//! The partner `psi_2` is scaled so that the first relation holds exactly,
//! which fixes its coefficient to `i (n - lambda + i mu + 1/2) / ky` for
//! electrons and `(n + lambda + i mu + 1/2) / (i ky)` for holes. The older
//! printed coefficients with `kappa` in the denominator differ from these by
//! the real factor `ky / kappa` (electrons) or `-ky / kappa` (holes); they
//! are kept as [`psi2_printed_value`] and [`printed_spinor_value`] for
//! comparison. At `mu = 0` the two agree up to that sign.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{classify_regime, Branch, PotentialParams, Regime};
use crate::numeric::{l2_normalize, Grid};
use crate::specfun::{
    gudermannian_phase, jacobi_poly, jacobi_poly_derivative, jacobi_poly_nth_derivative,
    sech_pow, JacobiParams,
};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// One admissible zero mode. `ky` is the positive root; `-ky` is the
/// partner obtained by swapping sublattices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroMode {
    pub n: usize,
    pub ky: f64,
    pub regime: Regime,
    /// Asymptotic decay rate, `ky^2 - mu^2 = kappa^2`.
    pub kappa: f64,
}

/// Sign of the transverse momentum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KySign {
    Plus,
    Minus,
}

impl KySign {
    pub fn apply(self, ky: f64) -> f64 {
        match self {
            KySign::Plus => ky,
            KySign::Minus => -ky,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinorSample {
    pub x: f64,
    pub psi_a: Complex64,
    pub psi_b: Complex64,
    pub dpsi_a: Complex64,
    pub dpsi_b: Complex64,
}

impl SpinorSample {
    pub fn scaled(self, s: f64) -> Self {
        Self {
            x: self.x,
            psi_a: self.psi_a * s,
            psi_b: self.psi_b * s,
            dpsi_a: self.dpsi_a * s,
            dpsi_b: self.dpsi_b * s,
        }
    }

    /// The sublattice-swapped sample (`psi_A <-> psi_B`).
    pub fn swapped(self) -> Self {
        Self {
            x: self.x,
            psi_a: self.psi_b,
            psi_b: self.psi_a,
            dpsi_a: self.dpsi_b,
            dpsi_b: self.dpsi_a,
        }
    }
}

/// Value and first two x-derivatives of a component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: Complex64,
    pub d1: Complex64,
    pub d2: Complex64,
}

/// `coeff (sech x)^power exp(phase atan(sinh x)) P(i sinh x)`
#[derive(Debug, Clone, Copy)]
struct Component {
    coeff: Complex64,
    power: f64,
    phase: Complex64,
    jacobi: JacobiParams,
}

impl Component {
    fn value(&self, x: f64) -> Complex64 {
        let z = Complex64::new(0.0, x.sinh());
        self.envelope(x) * jacobi_poly(self.jacobi, z)
    }

    fn envelope(&self, x: f64) -> Complex64 {
        self.coeff * sech_pow(x, self.power) * (self.phase * gudermannian_phase(x)).exp()
    }

    fn jet(&self, x: f64) -> Jet {
        let sech = 1.0 / x.cosh();
        let tanh = x.tanh();
        let env = self.envelope(x);
        // env' = env * h
        let h = -self.power * tanh + self.phase * sech;
        let dh = -self.power * sech * sech - self.phase * sech * tanh;

        let z = Complex64::new(0.0, x.sinh());
        let dz = Complex64::new(0.0, x.cosh());
        let p0 = jacobi_poly(self.jacobi, z);
        let p1 = jacobi_poly_derivative(self.jacobi, z);
        let p2 = jacobi_poly_nth_derivative(self.jacobi, 2, z);
        let q1 = p1 * dz;
        let q2 = p2 * dz * dz + p1 * z;

        Jet {
            value: env * p0,
            d1: env * (h * p0 + q1),
            d2: env * ((h * h + dh) * p0 + 2.0 * h * q1 + q2),
        }
    }
}

/// Largest real `n` bound: admissible modes have `n < |lambda| - 1/2`.
pub fn mode_bound(p: PotentialParams) -> f64 {
    p.lambda.abs() - 0.5
}

/// Number of admissible `n`. Zero outside the bound regimes.
pub fn zero_mode_count(p: PotentialParams) -> usize {
    if !classify_regime(p).has_bound_states() {
        return 0;
    }
    let bound = mode_bound(p);
    (0..).take_while(|&n| (n as f64) < bound).count()
}

/// The mode with quantum number `n`, if admissible.
pub fn zero_mode(p: PotentialParams, n: usize) -> Result<ZeroMode> {
    let regime = classify_regime(p);
    match regime {
        Regime::Invalid => return Err(Error::InvalidRegime),
        Regime::NoBoundStates => return Err(Error::NoBoundStates { regime }),
        _ => {}
    }
    let bound = mode_bound(p);
    if n as f64 >= bound {
        return Err(Error::InadmissibleMode { n, bound });
    }
    let kappa = bound - n as f64;
    Ok(ZeroMode {
        n,
        ky: p.mu.hypot(kappa),
        regime,
        kappa,
    })
}

/// All admissible modes, ascending in `n`. Empty when the well binds nothing.
pub fn zero_mode_spectrum(p: PotentialParams) -> Result<Vec<ZeroMode>> {
    if classify_regime(p) == Regime::Invalid {
        return Err(Error::InvalidRegime);
    }
    (0..zero_mode_count(p)).map(|n| zero_mode(p, n)).collect()
}

fn check_mode(p: PotentialParams, m: &ZeroMode) -> Result<()> {
    let potential = classify_regime(p);
    if potential != m.regime {
        return Err(Error::RegimeMismatch { mode: m.regime, potential });
    }
    if !potential.has_bound_states() {
        return Err(Error::NoBoundStates { regime: potential });
    }
    let bound = mode_bound(p);
    if m.n as f64 >= bound {
        return Err(Error::InadmissibleMode { n: m.n, bound });
    }
    Ok(())
}

fn psi1_component(p: PotentialParams, m: &ZeroMode) -> Component {
    let PotentialParams { lambda, mu } = p;
    let c = Complex64::new;
    match m.regime {
        Regime::ElectronBound => Component {
            coeff: c(1.0, 0.0),
            power: lambda - 0.5,
            phase: c(-mu, 0.5),
            jacobi: JacobiParams::new(c(-lambda - 0.5, -mu), c(-lambda + 0.5, mu), m.n),
        },
        _ => Component {
            coeff: c(1.0, 0.0),
            power: -(lambda + 0.5),
            phase: c(mu, -0.5),
            jacobi: JacobiParams::new(c(lambda + 0.5, mu), c(lambda - 0.5, -mu), m.n),
        },
    }
}

/// Partner component with coefficient `numerator / denominator`.
fn psi2_component(p: PotentialParams, m: &ZeroMode, printed: bool) -> Component {
    let PotentialParams { lambda, mu } = p;
    let n = m.n as f64;
    let c = Complex64::new;
    match m.regime {
        Regime::ElectronBound => {
            let numerator = I * c(n - lambda + 0.5, mu);
            let denominator = if printed { lambda - n - 0.5 } else { m.ky };
            Component {
                coeff: numerator / denominator,
                power: lambda - 0.5,
                phase: c(-mu, -0.5),
                jacobi: JacobiParams::new(c(-lambda + 0.5, -mu), c(-lambda - 0.5, mu), m.n),
            }
        }
        _ => {
            let numerator = c(n + lambda + 0.5, mu);
            let denominator = I * if printed { lambda + n + 0.5 } else { m.ky };
            Component {
                coeff: numerator / denominator,
                power: -(lambda + 0.5),
                phase: c(mu, 0.5),
                jacobi: JacobiParams::new(c(lambda - 0.5, mu), c(lambda + 0.5, -mu), m.n),
            }
        }
    }
}

/// Unnormalized `psi_1 = psi_A + psi_B`.
pub fn psi1_value(p: PotentialParams, m: &ZeroMode, x: f64) -> Result<Complex64> {
    check_mode(p, m)?;
    Ok(psi1_component(p, m).value(x))
}

/// Unnormalized `psi_2 = psi_A - psi_B`, scaled to satisfy the first-order
/// relation with `psi_1` at `+ky`.
pub fn psi2_value(p: PotentialParams, m: &ZeroMode, x: f64) -> Result<Complex64> {
    check_mode(p, m)?;
    Ok(psi2_component(p, m, false).value(x))
}

/// `psi_2` with the `kappa`-denominator coefficient. Equals
/// `±(ky / kappa) * psi2_value` (+ for electrons, - for holes), so it does
/// not satisfy the first-order relation with `psi_1` except for electrons
/// at `mu = 0`.
pub fn psi2_printed_value(p: PotentialParams, m: &ZeroMode, x: f64) -> Result<Complex64> {
    check_mode(p, m)?;
    Ok(psi2_component(p, m, true).value(x))
}

/// Value and derivatives of `psi_1` (`Branch::Plus`) or `psi_2` (`Branch::Minus`).
pub fn component_jet(p: PotentialParams, m: &ZeroMode, which: Branch, x: f64) -> Result<Jet> {
    check_mode(p, m)?;
    Ok(match which {
        Branch::Plus => psi1_component(p, m).jet(x),
        Branch::Minus => psi2_component(p, m, false).jet(x),
    })
}

/// `(psi_A, psi_B)` and their derivatives. For `KySign::Minus` the
/// sublattices are swapped, which solves the system at `-ky`.
pub fn spinor_value(p: PotentialParams, m: &ZeroMode, sign: KySign, x: f64) -> Result<SpinorSample> {
    check_mode(p, m)?;
    let j1 = psi1_component(p, m).jet(x);
    let j2 = psi2_component(p, m, false).jet(x);
    let sample = SpinorSample {
        x,
        psi_a: (j1.value + j2.value) * 0.5,
        psi_b: (j1.value - j2.value) * 0.5,
        dpsi_a: (j1.d1 + j2.d1) * 0.5,
        dpsi_b: (j1.d1 - j2.d1) * 0.5,
    };
    Ok(match sign {
        KySign::Plus => sample,
        KySign::Minus => sample.swapped(),
    })
}

/// Spinor sampled on every grid point.
pub fn spinor_samples(
    p: PotentialParams,
    m: &ZeroMode,
    sign: KySign,
    grid: &Grid,
) -> Result<Vec<SpinorSample>> {
    grid.points().map(|x| spinor_value(p, m, sign, x)).collect()
}

/// Spinor scaled so that `∫ |psi_A|^2 + |psi_B|^2 dx = 1` over the grid.
/// Also returns the norm of the raw samples.
pub fn normalized_spinor_samples(
    p: PotentialParams,
    m: &ZeroMode,
    sign: KySign,
    grid: &Grid,
) -> Result<(Vec<SpinorSample>, f64)> {
    let raw = spinor_samples(p, m, sign, grid)?;
    l2_normalize(&raw, grid)
}

/// `(psi_A, psi_B)` at `+ky` written out literally with the
/// `kappa`-denominator coefficient:
///
/// ```text
/// electrons: 1/2 (sech x)^(lambda-1/2) exp[-(mu + i/2) g] [exp(i g) P1 ± c P2]
/// holes:     1/2 (sech x)^(-(lambda+1/2)) exp[(mu + i/2) g] [exp(-i g) P1 ± c P2]
/// ```
///
/// with `g = atan(sinh x)`.
pub fn printed_spinor_value(p: PotentialParams, m: &ZeroMode, x: f64) -> Result<(Complex64, Complex64)> {
    check_mode(p, m)?;
    let PotentialParams { lambda, mu } = p;
    let n = m.n as f64;
    let g = gudermannian_phase(x);
    let z = Complex64::new(0.0, x.sinh());
    let c = Complex64::new;
    let (envelope, first, coeff, p1, p2) = match m.regime {
        Regime::ElectronBound => (
            sech_pow(x, lambda - 0.5) * (c(-mu, -0.5) * g).exp(),
            (I * g).exp(),
            I * c(n - lambda + 0.5, mu) / (lambda - n - 0.5),
            JacobiParams::new(c(-lambda - 0.5, -mu), c(-lambda + 0.5, mu), m.n),
            JacobiParams::new(c(-lambda + 0.5, -mu), c(-lambda - 0.5, mu), m.n),
        ),
        _ => (
            sech_pow(x, -(lambda + 0.5)) * (c(mu, 0.5) * g).exp(),
            (-I * g).exp(),
            c(n + lambda + 0.5, mu) / (I * (lambda + n + 0.5)),
            JacobiParams::new(c(lambda + 0.5, mu), c(lambda - 0.5, -mu), m.n),
            JacobiParams::new(c(lambda - 0.5, mu), c(lambda + 0.5, -mu), m.n),
        ),
    };
    let t1 = first * jacobi_poly(p1, z);
    let t2 = coeff * jacobi_poly(p2, z);
    Ok((0.5 * envelope * (t1 + t2), 0.5 * envelope * (t1 - t2)))
}
