//! Riemann–Siegel formula for `Z(t)` with four remainder coefficients.
//!
//! With `a = sqrt(t/2π)`, `N = ⌊a⌋`, `p = a - N`:
//!
//! `Z(t) = 2 Σ_{n<=N} cos(θ(t) - t log n)/√n
//!         + (-1)^{N-1} a^{-1/2} [C0(p) + C1(p)/a + C2(p)/a² + C3(p)/a³]`
//!
//! The coefficients are the classical derivative combinations of
//! `Ψ(p) = cos(2π(p² - p - 1/16)) / cos(2πp)`:
//!
//! `C0 = Ψ`,
//! `C1 = -Ψ⁽³⁾/(96π²)`,
//! `C2 = Ψ⁽²⁾/(64π²) + Ψ⁽⁶⁾/(18432π⁴)`,
//! `C3 = -Ψ⁽¹⁾/(64π²) - Ψ⁽⁵⁾/(3840π⁴) - Ψ⁽⁹⁾/(5308416π⁶)`.
//!
//! `Ψ` is entire (the cosine zeros cancel), so each `C_j` is fitted
//! once per process by Chebyshev interpolation on `p ∈ [0, 1]`; node
//! values come from contour (Cauchy-integral) derivatives of `Ψ`, which
//! avoids hand-expanded ninth derivatives. The fit is exact to working
//! precision and is validated against the Euler–Maclaurin path in the
//! tests.

use alloc::vec::Vec;

use num_complex::Complex64;

use super::theta::riemann_siegel_theta;
use crate::math::{ccos, FloatExt};

const PI: f64 = core::f64::consts::PI;
const TAU: f64 = core::f64::consts::TAU;

/// `Ψ` at a complex point, with a nudge off the removable singularities.
fn psi_complex(w: Complex64) -> Complex64 {
    let den = ccos(TAU * w);
    let w = if den.norm_sqr() < 1e-24 {
        w + Complex64::new(1e-9, 1e-9)
    } else {
        w
    };
    let num = ccos(TAU * (w * w - w - Complex64::new(1.0 / 16.0, 0.0)));
    num / ccos(TAU * w)
}

/// Derivatives `Ψ^(m)(p)` for `m = 0..=max_order` by the trapezoidal
/// Cauchy integral on a circle of radius `r` (spectrally accurate for
/// entire functions).
fn psi_derivatives(p: f64, max_order: usize, r: f64, m_points: usize) -> Vec<f64> {
    let mut values = Vec::with_capacity(m_points);
    for j in 0..m_points {
        let th = TAU * j as f64 / m_points as f64;
        let w = Complex64::new(p + r * th.cos_x(), r * th.sin_x());
        values.push(psi_complex(w));
    }
    let mut out = Vec::with_capacity(max_order + 1);
    let mut factorial = 1.0f64;
    for m in 0..=max_order {
        if m > 0 {
            factorial *= m as f64;
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, v) in values.iter().enumerate() {
            let th = TAU * (m * j % m_points) as f64 / m_points as f64;
            // e^{-i m θ_j}
            let (s, c) = th.sin_cos_x();
            acc += v * Complex64::new(c, -s);
        }
        out.push(factorial / (m_points as f64 * r.powi_x(m as i32)) * acc.re);
    }
    out
}

fn coeff_values(p: f64) -> [f64; 4] {
    let d = psi_derivatives(p, 9, 0.5, 256);
    let pi2 = PI * PI;
    let pi4 = pi2 * pi2;
    let pi6 = pi4 * pi2;
    let c0 = d[0];
    let c1 = -d[3] / (96.0 * pi2);
    let c2 = d[2] / (64.0 * pi2) + d[6] / (18432.0 * pi4);
    let c3 = -d[1] / (64.0 * pi2) - d[5] / (3840.0 * pi4) - d[9] / (5308416.0 * pi6);
    [c0, c1, c2, c3]
}

/// Chebyshev interpolant of one remainder coefficient on `p ∈ [0, 1]`.
#[derive(Clone)]
pub(super) struct Chebyshev {
    coeffs: Vec<f64>,
}

impl Chebyshev {
    fn fit(values: &[f64]) -> Self {
        let n = values.len();
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = 0.0;
            for (j, &v) in values.iter().enumerate() {
                acc += v * (PI * k as f64 * (j as f64 + 0.5) / n as f64).cos_x();
            }
            coeffs.push(2.0 * acc / n as f64);
        }
        Self { coeffs }
    }

    fn eval(&self, p: f64) -> f64 {
        // Clenshaw on u = 2p - 1.
        let u = 2.0 * p - 1.0;
        let u2 = 2.0 * u;
        let mut b1 = 0.0;
        let mut b2 = 0.0;
        for &c in self.coeffs.iter().skip(1).rev() {
            let b0 = c + u2 * b1 - b2;
            b2 = b1;
            b1 = b0;
        }
        0.5 * self.coeffs[0] + u * b1 - b2
    }
}

/// The four fitted remainder coefficients.
pub(super) struct RsCoeffs {
    c: [Chebyshev; 4],
}

impl RsCoeffs {
    pub(super) fn build() -> Self {
        const NODES: usize = 48;
        let mut vals = [const { Vec::new() }; 4];
        for j in 0..NODES {
            let x = (PI * (j as f64 + 0.5) / NODES as f64).cos_x();
            let p = 0.5 * (x + 1.0);
            let cv = coeff_values(p);
            for (store, v) in vals.iter_mut().zip(cv) {
                store.push(v);
            }
        }
        RsCoeffs {
            c: [
                Chebyshev::fit(&vals[0]),
                Chebyshev::fit(&vals[1]),
                Chebyshev::fit(&vals[2]),
                Chebyshev::fit(&vals[3]),
            ],
        }
    }

    #[inline]
    fn remainder(&self, p: f64, inv_a: f64) -> f64 {
        let mut acc = 0.0;
        let mut pw = 1.0;
        for cheb in &self.c {
            acc += cheb.eval(p) * pw;
            pw *= inv_a;
        }
        acc
    }
}

/// Riemann–Siegel `Z(t)`; valid for `t` large enough that the engine
/// tables cover `N = ⌊sqrt(t/2π)⌋`.
pub(super) fn z_riemann_siegel(
    t: f64,
    ln_n: &[f64],
    inv_sqrt_n: &[f64],
    coeffs: &RsCoeffs,
) -> f64 {
    let theta = riemann_siegel_theta(t).expect("t >= 10 enforced by caller");
    let a = (t / TAU).sqrt_x();
    let big_n = a as usize;
    let p = a - big_n as f64;

    let mut main = 0.0;
    for n in 1..=big_n {
        main += inv_sqrt_n[n] * (theta - t * ln_n[n]).cos_x();
    }

    let sign = if big_n % 2 == 1 { 1.0 } else { -1.0 };
    let inv_a = 1.0 / a;
    let remainder = sign * inv_a.sqrt_x() * coeffs.remainder(p, inv_a);
    2.0 * main + remainder
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeta::em::z_euler_maclaurin;

    fn psi_direct(p: f64) -> f64 {
        (TAU * (p * p - p - 1.0 / 16.0)).cos_x() / (TAU * p).cos_x()
    }

    #[test]
    fn c0_interpolant_matches_direct_psi() {
        let coeffs = RsCoeffs::build();
        for i in 0..=40 {
            let p = i as f64 / 40.0;
            // Skip the removable singularities of the direct formula.
            if (p - 0.25).abs() < 1e-3 || (p - 0.75).abs() < 1e-3 {
                continue;
            }
            let direct = psi_direct(p);
            let fitted = coeffs.c[0].eval(p);
            assert!(
                (direct - fitted).abs() < 1e-9,
                "p={p}: {direct} vs {fitted}"
            );
        }
    }

    #[test]
    fn contour_derivatives_match_finite_differences_low_order() {
        // First and second derivatives are checkable by central
        // differences; higher orders lean on the Z cross-validation.
        let p = 0.37;
        let d = psi_derivatives(p, 2, 0.5, 256);
        let h = 1e-5;
        let fd1 = (psi_direct(p + h) - psi_direct(p - h)) / (2.0 * h);
        let fd2 = (psi_direct(p + h) - 2.0 * psi_direct(p) + psi_direct(p - h)) / (h * h);
        assert!((d[1] - fd1).abs() < 1e-6, "{} vs {fd1}", d[1]);
        assert!((d[2] - fd2).abs() < 1e-4, "{} vs {fd2}", d[2]);
    }

    #[test]
    fn agrees_with_euler_maclaurin_above_cutoff() {
        let engine = crate::zeta::ZetaEngine::new(6000.0).unwrap();
        for &t in &[500.0, 777.7, 1234.5, 2500.0, 5000.0] {
            let rs = engine.z(t).unwrap();
            let em = z_euler_maclaurin(t);
            assert!(
                (rs - em).abs() < 5e-7,
                "t={t}: RS {rs} vs EM {em} (diff {})",
                rs - em
            );
        }
    }
}
