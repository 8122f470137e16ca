//! Numerical verification: residuals of the Dirac and Schrödinger forms,
//! a shooting solver for the zero-mode momenta, L² quadrature and tail
//! decay fits.
//!
//! The shooting solver works only from the well `V(x)`; it never touches
//! the closed-form modes, so it serves as an independent check on them.
//!
//! At `E = 0` the Dirac system
//!
//! ```text
//! V psi_A - i (psi_B' + ky psi_B) = 0
//! V psi_B - i (psi_A' - ky psi_A) = 0
//! ```
//!
//! becomes real under `psi_A = a, psi_B = -i b`:
//!
//! ```text
//! a' =  ky a - V b
//! b' =  V a  - ky b
//! ```
//!
//! so the matching determinant of the two one-sided solutions is real and
//! its sign changes bracket the bound momenta.

use num_complex::Complex64;

use crate::analytic::SpinorSample;
use crate::error::{Error, Result};
use crate::model::{classify_regime, effective_potential, potential_value, Branch, PotentialParams, Regime};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Scan step in `ky` (upper bound; the scan is uniform in `kappa`).
pub const DEFAULT_SCAN_STEP: f64 = 0.01;

/// Roots whose matching function does not vanish to this level are
/// discarded as spurious sign changes.
const ROOT_CONFIRMATION: f64 = 1e-6;

const RENORMALIZE_ABOVE: f64 = 1e64;

/// Uniform sampling of `[x_min, x_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    x_min: f64,
    x_max: f64,
    n_points: usize,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite()) || x_min >= x_max {
            return Err(Error::InvalidGrid(format!("need x_min < x_max, got [{x_min}, {x_max}]")));
        }
        if n_points < 3 {
            return Err(Error::InvalidGrid(format!("need at least 3 points, got {n_points}")));
        }
        Ok(Self { x_min, x_max, n_points })
    }

    /// Grid whose spacing is the largest value `<= spacing` that divides the interval.
    pub fn with_spacing(x_min: f64, x_max: f64, spacing: f64) -> Result<Self> {
        if !(spacing > 0.0) {
            return Err(Error::InvalidGrid(format!("spacing must be positive, got {spacing}")));
        }
        let intervals = ((x_max - x_min) / spacing - 1e-9).ceil().max(2.0);
        Self::new(x_min, x_max, intervals as usize + 1)
    }

    /// `[-25, 25]` at spacing 0.01.
    pub fn default_verification() -> Self {
        Self::new(-25.0, 25.0, 5001).expect("valid default grid")
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.n_points {
            self.x_max
        } else {
            self.x_min + i as f64 * self.spacing()
        }
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |i| self.point(i))
    }
}

/// Largest residual of the two first-order equations at `E = 0`.
pub fn dirac_residual(p: PotentialParams, ky: f64, samples: &[SpinorSample]) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    Ok(samples
        .iter()
        .map(|s| {
            let v = potential_value(p, s.x);
            let eq_a = v * s.psi_a - I * (s.dpsi_b + ky * s.psi_b);
            let eq_b = v * s.psi_b - I * (s.dpsi_a - ky * s.psi_a);
            eq_a.norm().max(eq_b.norm())
        })
        .fold(0.0, f64::max))
}

/// `max |-psi'' + V_branch(x) psi|` with `V_branch` already containing `ky^2`.
pub fn schrodinger_residual(
    p: PotentialParams,
    br: Branch,
    ky: f64,
    values: &[(f64, Complex64)],
    second_derivs: &[Complex64],
) -> Result<f64> {
    if values.len() != second_derivs.len() {
        return Err(Error::LengthMismatch(values.len(), second_derivs.len()));
    }
    if values.is_empty() {
        return Err(Error::EmptySamples);
    }
    Ok(values
        .iter()
        .zip(second_derivs)
        .map(|(&(x, psi), &d2)| (-d2 + effective_potential(p, br, ky, x) * psi).norm())
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingResult {
    pub ky: f64,
    /// `|W(ky)|` of the normalized matching determinant at the returned root.
    pub matching_residual: f64,
    /// Bisection steps after bracketing.
    pub iterations: usize,
    /// Scan bracket in `ky` that contained the sign change.
    pub bracket: (f64, f64),
}

/// Well values on the half-step lattice of one side of the integration.
struct HalfLattice {
    values: Vec<f64>,
    step: f64,
    steps: usize,
}

impl HalfLattice {
    /// Lattice from `start` to 0 with the nominal spacing.
    fn new(p: PotentialParams, start: f64, spacing: f64) -> Self {
        let steps = (start.abs() / spacing - 1e-9).ceil().max(1.0) as usize;
        let step = -start / steps as f64;
        let values = (0..=2 * steps)
            .map(|j| potential_value(p, start + 0.5 * step * j as f64))
            .collect();
        Self { values, step, steps }
    }
}

/// Precomputed integration data for one well and grid.
pub struct Shooter {
    mu: f64,
    left: HalfLattice,
    right: HalfLattice,
}

impl Shooter {
    /// The grid spacing is the integrator step; the grid must straddle 0.
    pub fn new(p: PotentialParams, grid: &Grid) -> Result<Self> {
        if !(grid.x_min() < 0.0 && grid.x_max() > 0.0) {
            return Err(Error::InvalidGrid("shooting grid must contain the matching point x = 0".into()));
        }
        let h = grid.spacing();
        Ok(Self {
            mu: p.mu,
            left: HalfLattice::new(p, grid.x_min(), h),
            right: HalfLattice::new(p, grid.x_max(), h),
        })
    }

    /// Normalized matching determinant `W(ky)` at `x = 0`, in `[-1, 1]`.
    /// Requires `ky > |mu|`.
    pub fn matching_function(&self, ky: f64) -> f64 {
        let kappa = (ky * ky - self.mu * self.mu).sqrt();
        // decaying eigenvectors of the constant-coefficient limits V(∓∞) = ∓mu
        let left = integrate(&self.left, ky, [ky + kappa, -self.mu]);
        let right = integrate(&self.right, ky, [self.mu, ky + kappa]);
        let det = left[0] * right[1] - left[1] * right[0];
        det / (left[0].hypot(left[1]) * right[0].hypot(right[1]))
    }
}

fn rhs(ky: f64, v: f64, u: [f64; 2]) -> [f64; 2] {
    [ky * u[0] - v * u[1], v * u[0] - ky * u[1]]
}

/// Classical RK4 across the lattice, rescaling to avoid overflow.
fn integrate(lat: &HalfLattice, ky: f64, mut u: [f64; 2]) -> [f64; 2] {
    let h = lat.step;
    let axpy = |u: [f64; 2], k: [f64; 2], s: f64| [u[0] + s * k[0], u[1] + s * k[1]];
    for i in 0..lat.steps {
        let v0 = lat.values[2 * i];
        let vh = lat.values[2 * i + 1];
        let v1 = lat.values[2 * i + 2];
        let k1 = rhs(ky, v0, u);
        let k2 = rhs(ky, vh, axpy(u, k1, 0.5 * h));
        let k3 = rhs(ky, vh, axpy(u, k2, 0.5 * h));
        let k4 = rhs(ky, v1, axpy(u, k3, h));
        u[0] += h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
        u[1] += h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
        let norm = u[0].hypot(u[1]);
        if norm > RENORMALIZE_ABOVE {
            u = [u[0] / norm, u[1] / norm];
        }
    }
    u
}

/// Every `ky` in `(|mu|, ky_max]` admitting a zero mode that decays on both
/// sides, found by scanning and bisecting the matching function.
///
/// The grid spacing sets the RK4 step. Regimes without bound states are
/// still scanned (the result should be empty); only `lambda = 0` is rejected.
pub fn shoot_spectrum(p: PotentialParams, ky_max: f64, grid: &Grid, tol: f64) -> Result<Vec<ShootingResult>> {
    shoot_spectrum_with_step(p, ky_max, grid, tol, DEFAULT_SCAN_STEP)
}

/// [`shoot_spectrum`] with an explicit scan step.
pub fn shoot_spectrum_with_step(
    p: PotentialParams,
    ky_max: f64,
    grid: &Grid,
    tol: f64,
    scan_step: f64,
) -> Result<Vec<ShootingResult>> {
    if classify_regime(p) == Regime::Invalid {
        return Err(Error::InvalidRegime);
    }
    let mu_abs = p.mu.abs();
    if !(ky_max > mu_abs) {
        return Err(Error::KyMaxTooSmall { ky_max, mu_abs });
    }
    let shooter = Shooter::new(p, grid)?;
    let ky_of = |kappa: f64| p.mu.hypot(kappa);

    // uniform in kappa: d(ky) = kappa d(kappa) / ky <= d(kappa)
    let kappa_max = (ky_max * ky_max - p.mu * p.mu).sqrt();
    let cells = (kappa_max / scan_step).ceil().max(1.0) as usize;
    let dk = kappa_max / cells as f64;
    let nodes: Vec<f64> = std::iter::once(0.5 * dk.min(scan_step))
        .chain((1..=cells).map(|i| i as f64 * dk))
        .map(ky_of)
        .collect();
    let values: Vec<f64> = nodes.iter().map(|&k| shooter.matching_function(k)).collect();

    let mut roots = Vec::new();
    for i in 0..nodes.len() - 1 {
        let (k0, k1) = (nodes[i], nodes[i + 1]);
        let (w0, w1) = (values[i], values[i + 1]);
        if w0 == 0.0 {
            roots.push(ShootingResult { ky: k0, matching_residual: 0.0, iterations: 0, bracket: (k0, k0) });
            continue;
        }
        if w0.signum() == w1.signum() || w1 == 0.0 {
            continue;
        }
        let (mut lo, mut hi, mut wlo) = (k0, k1, w0);
        let mut iterations = 0;
        while hi - lo > tol && iterations < 200 {
            let mid = 0.5 * (lo + hi);
            let wm = shooter.matching_function(mid);
            iterations += 1;
            if wm == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if wm.signum() == wlo.signum() {
                lo = mid;
                wlo = wm;
            } else {
                hi = mid;
            }
        }
        let ky = 0.5 * (lo + hi);
        let residual = shooter.matching_function(ky).abs();
        if residual <= ROOT_CONFIRMATION {
            roots.push(ShootingResult { ky, matching_residual: residual, iterations, bracket: (k0, k1) });
        }
    }
    if let Some(&last) = values.last() {
        if last == 0.0 {
            let k = *nodes.last().unwrap();
            roots.push(ShootingResult { ky: k, matching_residual: 0.0, iterations: 0, bracket: (k, k) });
        }
    }
    Ok(roots)
}

/// Trapezoidal `∫ |psi_A|^2 + |psi_B|^2 dx` over the grid; returns the
/// samples scaled to unit norm and the original norm (square root of the
/// integral).
pub fn l2_normalize(samples: &[SpinorSample], grid: &Grid) -> Result<(Vec<SpinorSample>, f64)> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    if samples.len() != grid.n_points() {
        return Err(Error::LengthMismatch(samples.len(), grid.n_points()));
    }
    let density = |s: &SpinorSample| s.psi_a.norm_sqr() + s.psi_b.norm_sqr();
    let inner: f64 = samples[1..samples.len() - 1].iter().map(density).sum();
    let ends = 0.5 * (density(&samples[0]) + density(&samples[samples.len() - 1]));
    let norm = ((inner + ends) * grid.spacing()).sqrt();
    if !(norm >= 1e-300) {
        return Err(Error::DegenerateNorm(norm));
    }
    Ok((samples.iter().map(|s| s.scaled(1.0 / norm)).collect(), norm))
}

/// Least-squares slope of `-ln(|psi_A| + |psi_B|)` over `x > tail_start`.
pub fn estimate_decay_rate(samples: &[SpinorSample], tail_start: f64) -> Result<f64> {
    let tail: Vec<(f64, f64)> = samples
        .iter()
        .filter(|s| s.x > tail_start)
        .map(|s| (s.x, s.psi_a.norm() + s.psi_b.norm()))
        .collect();
    if tail.len() < 8 {
        return Err(Error::TooFewTailPoints(tail.len()));
    }
    if let Some(&(x, _)) = tail.iter().find(|(_, a)| !(*a > 0.0 && a.is_finite())) {
        return Err(Error::UnderflowedTail(x));
    }
    let n = tail.len() as f64;
    let mean_x = tail.iter().map(|t| t.0).sum::<f64>() / n;
    let mean_y = tail.iter().map(|t| -t.1.ln()).sum::<f64>() / n;
    let (sxy, sxx) = tail.iter().fold((0.0, 0.0), |(sxy, sxx), &(x, a)| {
        let dx = x - mean_x;
        (sxy + dx * (-a.ln() - mean_y), sxx + dx * dx)
    });
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(lambda: f64, mu: f64) -> PotentialParams {
        PotentialParams::new(lambda, mu).unwrap()
    }

    fn sample(x: f64, a: Complex64, b: Complex64) -> SpinorSample {
        SpinorSample { x, psi_a: a, psi_b: b, dpsi_a: Complex64::default(), dpsi_b: Complex64::default() }
    }

    #[test]
    fn grid_basics() {
        let g = Grid::default_verification();
        assert_relative_eq!(g.spacing(), 0.01, epsilon = 1e-15);
        assert_eq!(g.points().count(), 5001);
        assert_eq!(g.points().last(), Some(25.0));
        assert!(Grid::new(1.0, 1.0, 10).is_err());
        assert!(Grid::new(0.0, 1.0, 2).is_err());
        let h = Grid::with_spacing(-1.0, 1.0, 0.3).unwrap();
        assert!(h.spacing() <= 0.3);
        assert_eq!(h.n_points(), 8);
    }

    #[test]
    fn zero_spinor_has_zero_residual() {
        let samples: Vec<_> = (0..10).map(|i| sample(i as f64, Complex64::default(), Complex64::default())).collect();
        assert_eq!(dirac_residual(params(4.0, 1.0), 3.0, &samples).unwrap(), 0.0);
        assert_eq!(dirac_residual(params(4.0, 1.0), 3.0, &[]), Err(Error::EmptySamples));
        let vals: Vec<_> = (0..10).map(|i| (i as f64, Complex64::default())).collect();
        let d2 = vec![Complex64::default(); 10];
        assert_eq!(schrodinger_residual(params(4.0, 1.0), Branch::Plus, 1.0, &vals, &d2).unwrap(), 0.0);
        assert_eq!(
            schrodinger_residual(params(4.0, 1.0), Branch::Plus, 1.0, &vals, &d2[..3]),
            Err(Error::LengthMismatch(10, 3))
        );
    }

    #[test]
    fn shooting_argument_errors() {
        let g = Grid::new(-10.0, 10.0, 1001).unwrap();
        assert_eq!(shoot_spectrum(params(0.0, 1.0), 5.0, &g, 1e-8), Err(Error::InvalidRegime));
        assert!(matches!(shoot_spectrum(params(4.0, 1.0), 1.0, &g, 1e-8), Err(Error::KyMaxTooSmall { .. })));
        let off = Grid::new(1.0, 10.0, 101).unwrap();
        assert!(matches!(shoot_spectrum(params(4.0, 1.0), 5.0, &off, 1e-8), Err(Error::InvalidGrid(_))));
    }

    #[test]
    fn shooting_finds_worked_point_roots() {
        // sqrt(1 + (3.5 - n)^2)
        let expected = [1.25f64.sqrt(), 3.25f64.sqrt(), 7.25f64.sqrt(), 13.25f64.sqrt()];
        let grid = Grid::with_spacing(-25.0, 25.0, 0.001).unwrap();
        for lambda in [4.0, -4.0] {
            let roots = shoot_spectrum(params(lambda, 1.0), 5.0, &grid, 1e-10).unwrap();
            assert_eq!(roots.len(), 4, "{lambda}: {roots:?}");
            for (r, want) in roots.iter().zip(expected) {
                assert!((r.ky - want).abs() < 1e-8, "{} vs {want}", r.ky);
                assert!(r.bracket.0 <= r.ky && r.ky <= r.bracket.1);
                assert!(r.matching_residual <= ROOT_CONFIRMATION);
            }
        }
    }

    #[test]
    fn shooting_finds_nothing_in_excluded_range() {
        let grid = Grid::with_spacing(-25.0, 25.0, 0.01).unwrap();
        assert!(shoot_spectrum(params(0.4, 1.0), 10.0, &grid, 1e-10).unwrap().is_empty());
    }

    #[test]
    fn normalization_examples() {
        let g = Grid::new(0.0, 1.0, 1001).unwrap();
        let ones: Vec<_> = g.points().map(|x| sample(x, Complex64::new(1.0, 0.0), Complex64::default())).collect();
        let (normed, norm) = l2_normalize(&ones, &g).unwrap();
        assert_relative_eq!(norm, 1.0, epsilon = 1e-14);
        assert_relative_eq!(normed[500].psi_a.re, 1.0, epsilon = 1e-14);

        let doubled: Vec<_> = ones.iter().map(|s| s.scaled(2.0)).collect();
        let (_, n2) = l2_normalize(&doubled, &g).unwrap();
        assert_relative_eq!(n2 * n2, 4.0 * norm * norm, epsilon = 1e-13);

        let zeros: Vec<_> = ones.iter().map(|s| s.scaled(0.0)).collect();
        assert!(matches!(l2_normalize(&zeros, &g), Err(Error::DegenerateNorm(_))));
        assert!(matches!(l2_normalize(&ones[..10], &g), Err(Error::LengthMismatch(10, 1001))));
    }

    #[test]
    fn decay_fit_self_test() {
        let g = Grid::new(0.0, 20.0, 2001).unwrap();
        let s: Vec<_> = g.points().map(|x| sample(x, Complex64::new((-2.0 * x).exp(), 0.0), Complex64::default())).collect();
        assert_relative_eq!(estimate_decay_rate(&s, 5.0).unwrap(), 2.0, epsilon = 1e-10);
        assert_eq!(estimate_decay_rate(&s, 19.955), Err(Error::TooFewTailPoints(5)));
        let mut bad = s.clone();
        bad[1500].psi_a = Complex64::default();
        assert!(matches!(estimate_decay_rate(&bad, 5.0), Err(Error::UnderflowedTail(_))));
    }
}
