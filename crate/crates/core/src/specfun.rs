//! Special functions used by the closed-form zero modes.
//!
//! Everything here is a pure function of its arguments. The Jacobi
//! polynomials take complex parameters and complex arguments, since the
//! wavefunctions evaluate `P_n^{(a,b)}(i sinh x)` with superscripts such as
//! `-lambda - i mu - 1/2`.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

/// Beyond this |x| `sinh` overflows; the phase has long since saturated.
const PHASE_SATURATION: f64 = 700.0;

/// The recurrence divides by `m + a + b` and `2m + a + b - 2`; below this
/// modulus its rounding error grows like the inverse, so the explicit sum is
/// used instead.
const RECURRENCE_CONDITION: f64 = 1.0;

/// `atan(sinh x)`, the Gudermannian function. Odd, with range `(-pi/2, pi/2)`.
pub fn gudermannian_phase(x: f64) -> f64 {
    if x.abs() > PHASE_SATURATION {
        return FRAC_PI_2.copysign(x);
    }
    x.sinh().atan()
}

/// `ln(sech x)`, accurate for all finite x (no overflow of `cosh`).
pub fn ln_sech(x: f64) -> f64 {
    let ax = x.abs();
    std::f64::consts::LN_2 - ax - (-2.0 * ax).exp().ln_1p()
}

/// `(sech x)^p` for real p of either sign.
pub fn sech_pow(x: f64, p: f64) -> f64 {
    (p * ln_sech(x)).exp()
}

/// Parameters and degree of a Jacobi polynomial `P_n^{(a,b)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    pub a: Complex64,
    pub b: Complex64,
    pub n: usize,
}

impl JacobiParams {
    pub fn new(a: Complex64, b: Complex64, n: usize) -> Self {
        Self { a, b, n }
    }

    /// The parameter set `(a + k, b + k)` of degree `n - k`, or `None` when `k > n`.
    pub fn shifted(self, k: usize) -> Option<Self> {
        let n = self.n.checked_sub(k)?;
        let k = k as f64;
        Some(Self {
            a: self.a + k,
            b: self.b + k,
            n,
        })
    }
}

/// Evaluates `P_n^{(a,b)}(z)` by the three-term recurrence in the degree.
///
/// When a recurrence denominator vanishes or comes close to it (for example
/// `a + b = 2 - 2m`) the polynomial is still well defined; those parameter
/// sets are evaluated by the explicit binomial sum instead.
pub fn jacobi_poly(p: JacobiParams, z: Complex64) -> Complex64 {
    let JacobiParams { a, b, n } = p;
    let one = Complex64::new(1.0, 0.0);
    if n == 0 {
        return one;
    }
    let p1 = (a - b) * 0.5 + (a + b + 2.0) * z * 0.5;
    if n == 1 {
        return p1;
    }

    let ill_conditioned = (2..=n).any(|m| {
        let m = m as f64;
        (a + b + m).norm() < RECURRENCE_CONDITION || (a + b + 2.0 * m - 2.0).norm() < RECURRENCE_CONDITION
    });
    if ill_conditioned {
        return jacobi_binomial_sum(p, z);
    }

    let (mut prev, mut cur) = (one, p1);
    for m in 2..=n {
        let m = m as f64;
        let c = a + b + 2.0 * m;
        let s = a + b + m;
        let lead = 2.0 * m * s * (c - 2.0);
        let lin = (c - 1.0) * (c * (c - 2.0) * z + a * a - b * b);
        let back = 2.0 * (a + m - 1.0) * (b + m - 1.0) * c;
        let next = (lin * cur - back * prev) / lead;
        prev = cur;
        cur = next;
    }
    cur
}

/// `sum_s C(n+a, n-s) C(n+b, s) ((z-1)/2)^s ((z+1)/2)^(n-s)`, valid for all complex a, b.
fn jacobi_binomial_sum(p: JacobiParams, z: Complex64) -> Complex64 {
    let JacobiParams { a, b, n } = p;
    let nf = n as f64;
    let zm = (z - 1.0) * 0.5;
    let zp = (z + 1.0) * 0.5;
    (0..=n)
        .map(|s| {
            binomial(a + nf, n - s) * binomial(b + nf, s) * zm.powu(s as u32) * zp.powu((n - s) as u32)
        })
        .sum()
}

/// Generalized binomial coefficient `w (w-1) ... (w-k+1) / k!`.
fn binomial(w: Complex64, k: usize) -> Complex64 {
    (0..k).fold(Complex64::new(1.0, 0.0), |acc, j| {
        acc * (w - j as f64) / (j + 1) as f64
    })
}

/// `d/dz P_n^{(a,b)}(z) = (n + a + b + 1)/2 * P_{n-1}^{(a+1,b+1)}(z)`.
pub fn jacobi_poly_derivative(p: JacobiParams, z: Complex64) -> Complex64 {
    jacobi_poly_nth_derivative(p, 1, z)
}

/// k-th derivative in z, by iterating the derivative identity.
pub fn jacobi_poly_nth_derivative(p: JacobiParams, k: usize, z: Complex64) -> Complex64 {
    let Some(shifted) = p.shifted(k) else {
        return Complex64::new(0.0, 0.0);
    };
    let base = p.a + p.b + p.n as f64;
    let factor = (1..=k).fold(Complex64::new(1.0, 0.0), |acc, j| {
        acc * (base + j as f64) * 0.5
    });
    factor * jacobi_poly(shifted, z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn factorial(n: u64) -> f64 {
        (1..=n).map(|k| k as f64).product()
    }

    fn pochhammer(x: Complex64, k: usize) -> Complex64 {
        (0..k).fold(c(1.0, 0.0), |acc, j| acc * (x + j as f64))
    }

    /// `P_n^{(a,b)}(z) = (-1)^n P_n^{(b,a)}(-z)`, applied so the expansion
    /// variable `(1 - z)/2` stays small.
    fn oracle(a: Complex64, b: Complex64, n: usize, z: Complex64) -> (Complex64, f64) {
        if z.re < 0.0 {
            let (v, mag) = series_oracle(b, a, n, -z);
            (if n % 2 == 0 { v } else { -v }, mag)
        } else {
            series_oracle(a, b, n, z)
        }
    }

    /// Terminating 2F1 form:
    /// `sum_k (-n)_k (n+a+b+1)_k (a+k+1)_{n-k} / (n! k!) ((1-z)/2)^k`.
    /// Returns the value and the sum of term magnitudes.
    fn series_oracle(a: Complex64, b: Complex64, n: usize, z: Complex64) -> (Complex64, f64) {
        let w = (c(1.0, 0.0) - z) * 0.5;
        let nf = factorial(n as u64);
        let mut sum = c(0.0, 0.0);
        let mut mag = 0.0;
        for k in 0..=n {
            let term = pochhammer(c(-(n as f64), 0.0), k)
                * pochhammer(a + b + (n + 1) as f64, k)
                * pochhammer(a + (k + 1) as f64, n - k)
                / (nf * factorial(k as u64))
                * w.powu(k as u32);
            mag += term.norm();
            sum += term;
        }
        (sum, mag)
    }

    #[test]
    fn phase_examples() {
        assert_eq!(gudermannian_phase(0.0), 0.0);
        assert_eq!(gudermannian_phase(800.0), FRAC_PI_2);
        assert_eq!(gudermannian_phase(-800.0), -FRAC_PI_2);
        assert!((gudermannian_phase(40.0) - FRAC_PI_2).abs() < 1e-15);
        // arctan series of sinh(1) = 1.1752011936438014 (|t| > 1, use pi/2 - atan(1/t))
        let t: f64 = (1.0f64.exp() - (-1.0f64).exp()) / 2.0;
        let inv = 1.0 / t;
        let atan_inv: f64 = (0..200)
            .map(|k| (-1.0f64).powi(k) * inv.powi(2 * k + 1) / (2 * k + 1) as f64)
            .sum();
        let oracle = FRAC_PI_2 - atan_inv;
        assert_relative_eq!(gudermannian_phase(1.0), oracle, epsilon = 1e-14);
        assert!((gudermannian_phase(1.0) - 0.86577).abs() < 1e-5);
    }

    #[test]
    fn sech_pow_matches_direct() {
        for &x in &[-3.0, -0.5, 0.0, 1.0, 10.0] {
            let direct = (1.0 / f64::cosh(x)).powf(3.5);
            assert_relative_eq!(sech_pow(x, 3.5), direct, max_relative = 1e-13);
        }
        // cosh(800) overflows; the log form does not
        let expected = (0.5 * (std::f64::consts::LN_2 - 800.0)).exp();
        assert_relative_eq!(sech_pow(800.0, 0.5), expected, max_relative = 1e-12);
    }

    #[test]
    fn degree_zero_and_one() {
        let (a, b) = (c(-4.5, -1.0), c(-3.5, 1.0));
        let z = c(0.3, 1.7);
        assert_eq!(jacobi_poly(JacobiParams::new(a, b, 0), z), c(1.0, 0.0));
        let expected = (a - b) / 2.0 + (a + b + 2.0) * z / 2.0;
        let got = jacobi_poly(JacobiParams::new(a, b, 1), z);
        assert!((got - expected).norm() < 1e-14);
        // coefficient check against the series oracle
        let (s, _) = series_oracle(a, b, 1, z);
        assert!((got - s).norm() < 1e-13);
    }

    #[test]
    fn p2_11_at_one_is_binomial() {
        // P_n^{(a,b)}(1) = C(n + a, n) = (n+a)! / (n! a!) = 3!/(2! 1!) = 3
        let oracle = factorial(3) / (factorial(2) * factorial(1));
        let got = jacobi_poly(JacobiParams::new(c(1.0, 0.0), c(1.0, 0.0), 2), c(1.0, 0.0));
        assert_relative_eq!(got.re, oracle, epsilon = 1e-14);
        assert_eq!(got.im, 0.0);
    }

    #[test]
    fn legendre_special_case() {
        // a = b = 0 reduces to Legendre: P_3(x) = (5x^3 - 3x)/2
        let x = 0.37;
        let got = jacobi_poly(JacobiParams::new(c(0.0, 0.0), c(0.0, 0.0), 3), c(x, 0.0));
        assert_relative_eq!(got.re, (5.0 * x * x * x - 3.0 * x) / 2.0, epsilon = 1e-15);
    }

    #[test]
    fn degenerate_recurrence_falls_back() {
        // a + b = -2 makes the m = 2 denominator vanish; a + b = -3 hits m + a + b = 0 at m = 3
        for (a, b, n) in [
            (c(-1.0, 0.5), c(-1.0, -0.5), 2usize),
            (c(-1.5, 2.0), c(-1.5, -2.0), 4),
            (c(-2.0, 0.0), c(-1.0, 0.0), 3),
        ] {
            let z = c(0.4, -1.1);
            let got = jacobi_poly(JacobiParams::new(a, b, n), z);
            let (s, mag) = oracle(a, b, n, z);
            assert!((got - s).norm() <= 1e-12 * mag.max(1.0), "{a} {b} {n}: {got} vs {s}");
        }
    }

    #[test]
    fn derivative_examples() {
        let (a, b) = (c(0.7, -0.2), c(-1.3, 2.0));
        assert_eq!(
            jacobi_poly_derivative(JacobiParams::new(a, b, 0), c(5.0, 1.0)),
            c(0.0, 0.0)
        );
        for z in [c(0.0, 0.0), c(1.5, -2.0)] {
            let d = jacobi_poly_derivative(JacobiParams::new(a, b, 1), z);
            assert!((d - (a + b + 2.0) / 2.0).norm() < 1e-15);
        }
        // Legendre P_2 slope at 0 by central difference
        let p = JacobiParams::new(c(0.0, 0.0), c(0.0, 0.0), 2);
        let h = 1e-6;
        let fd = (jacobi_poly(p, c(h, 0.0)) - jacobi_poly(p, c(-h, 0.0))) / (2.0 * h);
        assert!(fd.norm() < 1e-9);
        assert!(jacobi_poly_derivative(p, c(0.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn second_derivative_legendre() {
        // P_3'' = 15 x
        let p = JacobiParams::new(c(0.0, 0.0), c(0.0, 0.0), 3);
        let got = jacobi_poly_nth_derivative(p, 2, c(0.8, 0.0));
        assert_relative_eq!(got.re, 12.0, epsilon = 1e-13);
        assert_eq!(jacobi_poly_nth_derivative(p, 4, c(0.8, 0.0)), c(0.0, 0.0));
    }

    fn complex_in(r: f64) -> impl Strategy<Value = Complex64> {
        (-r..r, -r..r).prop_map(|(re, im)| Complex64::new(re, im))
    }

    proptest! {
        #[test]
        fn phase_is_odd(x in -800.0f64..800.0) {
            prop_assert_eq!(gudermannian_phase(-x), -gudermannian_phase(x));
        }

        #[test]
        fn real_parameters_give_real_values(a in -0.99f64..4.0, b in -0.99f64..4.0, n in 0usize..12, x in -2.0f64..2.0) {
            let v = jacobi_poly(JacobiParams::new(c(a, 0.0), c(b, 0.0), n), c(x, 0.0));
            prop_assert!(v.im.abs() <= 1e-12);
        }

        #[test]
        fn recurrence_matches_series(a in complex_in(5.0), b in complex_in(5.0), n in 0usize..=10, z in complex_in(1.414)) {
            let got = jacobi_poly(JacobiParams::new(a, b, n), z);
            // the oracle's own rounding is bounded by its term magnitudes
            let (s, mag) = oracle(a, b, n, z);
            prop_assert!((got - s).norm() <= 1e-10 * s.norm().max(1.0) + 1e-14 * mag, "{} vs {}", got, s);
        }

        #[test]
        fn derivative_matches_finite_difference(a in complex_in(3.0), b in complex_in(3.0), n in 1usize..=8, z in complex_in(1.414)) {
            let p = JacobiParams::new(a, b, n);
            let h = 1e-6;
            let fd = (jacobi_poly(p, z + h) - jacobi_poly(p, z - h)) / (2.0 * h);
            let d = jacobi_poly_derivative(p, z);
            let scale = d.norm().max(1.0);
            prop_assert!((fd - d).norm() <= 1e-6 * scale, "{} vs {}", fd, d);
        }
    }
}
