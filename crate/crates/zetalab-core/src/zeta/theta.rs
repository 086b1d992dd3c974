//! The Riemann–Siegel phase `θ(t)`.

use alloc::format;

use crate::math::FloatExt;
use crate::{Error, Result};

/// Asymptotic expansion
/// `θ(t) = (t/2) log(t/2π) - t/2 - π/8 + 1/(48t) + 7/(5760 t³) + ...`,
/// accurate to well below `1e-10` for `t >= 10`.
pub fn riemann_siegel_theta(t: f64) -> Result<f64> {
    if t < 10.0 {
        return Err(Error::Domain(format!(
            "theta requires t >= 10, got {t}"
        )));
    }
    let tau = core::f64::consts::TAU;
    let inv = 1.0 / t;
    let inv2 = inv * inv;
    // Correction coefficients for t^{-1}, t^{-3}, t^{-5}, t^{-7}, t^{-9}.
    let mut corr = 0.0;
    let coeffs = [
        1.0 / 48.0,
        7.0 / 5760.0,
        31.0 / 80640.0,
        127.0 / 430080.0,
        511.0 / 1216512.0,
    ];
    let mut pw = inv;
    for c in coeffs {
        corr += c * pw;
        pw *= inv2;
    }
    Ok(0.5 * t * (t / tau).ln_x() - 0.5 * t - core::f64::consts::FRAC_PI_8 + corr)
}

/// `θ'(t) = (1/2) log(t/2π) + O(t^{-2})`; used for grid densities.
pub fn theta_derivative(t: f64) -> f64 {
    0.5 * (t / core::f64::consts::TAU).ln_x() - 1.0 / (48.0 * t * t)
}
