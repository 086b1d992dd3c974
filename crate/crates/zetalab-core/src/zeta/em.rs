//! Euler–Maclaurin evaluation of `ζ(s)`.
//!
//! `O(t)` per call, so this serves as the production path only below
//! [`super::ZetaEngine::EM_CUTOFF`]; it doubles as the independent
//! cross-check for the Riemann–Siegel path in the test suite.

use num_complex::Complex64;

use super::theta::riemann_siegel_theta;
use crate::math::{cexp, cis, FloatExt};

/// `B_{2k}` for `k = 1..=15` as exact rationals.
const BERNOULLI_2K: [(f64, f64); 15] = [
    (1.0, 6.0),
    (-1.0, 30.0),
    (1.0, 42.0),
    (-1.0, 30.0),
    (5.0, 66.0),
    (-691.0, 2730.0),
    (7.0, 6.0),
    (-3617.0, 510.0),
    (43867.0, 798.0),
    (-174611.0, 330.0),
    (854513.0, 138.0),
    (-236364091.0, 2730.0),
    (8553103.0, 6.0),
    (-23749461029.0, 870.0),
    (8615841276005.0, 14322.0),
];

/// Euler–Maclaurin sum with `N` leading terms and `K` tail corrections:
///
/// `ζ(s) = Σ_{n<N} n^{-s} + N^{-s}/2 + N^{1-s}/(s-1)
///         + Σ_{k=1..K} B_{2k}/(2k)! (s)_{2k-1} N^{-s-2k+1}`.
pub fn zeta_euler_maclaurin(s: Complex64) -> Complex64 {
    let t = s.im.abs_x();
    let n = (t as usize).max(16) + 32;
    let k_terms = 12usize;

    let mut sum = Complex64::new(0.0, 0.0);
    for m in 1..n {
        let mf = m as f64;
        // m^{-s} = e^{-s ln m}
        sum += cexp(-s * mf.ln_x());
    }
    let nf = n as f64;
    let ln_nf = nf.ln_x();
    let n_pow_ms = cexp(-s * ln_nf);
    sum += 0.5 * n_pow_ms;
    sum += cexp((1.0 - s) * ln_nf) / (s - 1.0);

    // Tail: rising factorial (s)_{2k-1} built incrementally.
    let mut rising = s; // (s)_1
    let mut fact = 2.0f64; // (2k)! with k=1
    let mut n_pw = n_pow_ms / nf; // N^{-s-1}
    let inv_n2 = 1.0 / (nf * nf);
    for k in 1..=k_terms {
        let (bn, bd) = BERNOULLI_2K[k - 1];
        sum += (bn / (bd * fact)) * rising * n_pw;
        // Advance to k+1: multiply rising by (s+2k-1)(s+2k), factorial by
        // (2k+1)(2k+2), and shift the power of N down by two.
        let a = 2.0 * k as f64;
        rising = rising * (s + (a - 1.0)) * (s + a);
        fact *= (a + 1.0) * (a + 2.0);
        n_pw *= inv_n2;
    }
    sum
}

/// `Z(t)` through the functional relation `Z(t) = e^{iθ(t)} ζ(1/2+it)`.
pub fn z_euler_maclaurin(t: f64) -> f64 {
    let theta = riemann_siegel_theta(t).expect("t >= 10 enforced by caller");
    let zeta = zeta_euler_maclaurin(Complex64::new(0.5, t));
    (cis(theta) * zeta).re
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn bernoulli_table_satisfies_recurrence() {
        // Σ_{j=0}^{n} C(n+1, j) B_j = 0 with B_0 = 1, B_1 = -1/2 and the
        // odd values beyond B_1 all zero.
        let mut b = alloc::vec![0.0f64; 31];
        b[0] = 1.0;
        b[1] = -0.5;
        for (k, (num, den)) in BERNOULLI_2K.iter().enumerate() {
            b[2 * (k + 1)] = num / den;
        }
        for n in 1..30usize {
            let mut binom = 1.0f64;
            let mut acc = 0.0f64;
            let mut scale = 0.0f64;
            for j in 0..=n {
                acc += binom * b[j];
                scale = scale.max((binom * b[j]).abs());
                binom *= (n + 1 - j) as f64 / (j + 1) as f64;
            }
            assert!(
                acc.abs() <= 1e-9 * scale.max(1.0),
                "recurrence fails at n={n}: {acc}"
            );
        }
    }

    #[test]
    fn real_axis_reference_values() {
        let z2 = zeta_euler_maclaurin(Complex64::new(2.0, 0.0));
        assert_relative_eq!(
            z2.re,
            core::f64::consts::PI * core::f64::consts::PI / 6.0,
            epsilon = 1e-12
        );
        assert!(z2.im.abs() < 1e-14);
        let zh = zeta_euler_maclaurin(Complex64::new(0.5, 0.0));
        assert_relative_eq!(zh.re, -1.4603545088095868, epsilon = 1e-10);
    }

    #[test]
    fn z_is_real_consistency() {
        // e^{iθ} ζ(1/2+it) must come out real; θ from the asymptotic
        // series and ζ from Euler–Maclaurin are independent paths.
        for &t in &[50.0, 120.0, 390.0, 1500.0] {
            let theta = riemann_siegel_theta(t).unwrap();
            let zeta = zeta_euler_maclaurin(Complex64::new(0.5, t));
            let rotated = crate::math::cis(theta) * zeta;
            assert!(
                rotated.im.abs() < 1e-8 * (1.0 + rotated.re.abs()),
                "t={t}: imaginary residue {}",
                rotated.im
            );
        }
    }

    #[test]
    fn first_zero_kills_z() {
        let z = z_euler_maclaurin(14.134725141734694);
        assert!(z.abs() < 1e-8, "Z(gamma_1) = {z}");
    }
}
