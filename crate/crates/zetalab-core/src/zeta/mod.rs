//! Critical-line evaluation of the Riemann zeta function and certified
//! zero tables.
//!
//! `ζ(1/2 + it) = Z(t) e^{-iθ(t)}` with `Z` real; sign changes of `Z`
//! locate the zeros. Large `t` uses the Riemann–Siegel formula with
//! four remainder coefficients; small `t` (below
//! [`ZetaEngine::EM_CUTOFF`]) uses Euler–Maclaurin, which is cheap
//! there and accurate to roughly `1e-12`.

mod em;
mod rs;
mod theta;
mod zeros;

pub use em::zeta_euler_maclaurin;
pub use theta::{riemann_siegel_theta, theta_derivative};
pub use zeros::{absolute_count_below, find_zeros, ZeroTable};

use alloc::format;
use alloc::vec::Vec;

use crate::math::FloatExt;
use crate::{Error, Result};

/// Mean zero spacing `2π / log(t/2π)` near ordinate `t`.
#[inline]
pub fn mean_gap(t: f64) -> f64 {
    core::f64::consts::TAU / (t / core::f64::consts::TAU).ln_x()
}

/// Immutable evaluator for `Z(t)`, `θ(t)` and `|ζ(1/2+it)|` up to a
/// fixed height. Construction precomputes the `log n`/`n^{-1/2}` tables
/// for the Riemann–Siegel main sum and the remainder coefficient
/// interpolants; afterwards the engine is safe to share across threads.
pub struct ZetaEngine {
    t_max: f64,
    /// `ln n` for the main sum, index 0 unused.
    ln_n: Vec<f64>,
    /// `n^{-1/2}` for the main sum, index 0 unused.
    inv_sqrt_n: Vec<f64>,
    rs_coeffs: rs::RsCoeffs,
}

impl ZetaEngine {
    /// Below this ordinate `Z` is evaluated via Euler–Maclaurin.
    pub const EM_CUTOFF: f64 = 400.0;

    /// Build an engine valid for `10 <= t <= t_max`.
    pub fn new(t_max: f64) -> Result<Self> {
        if !(10.0..=1.0e8).contains(&t_max) {
            return Err(Error::Config(format!(
                "engine height {t_max} outside [10, 1e8]"
            )));
        }
        let n_max = (t_max / core::f64::consts::TAU).sqrt_x() as usize + 2;
        let mut ln_n = Vec::with_capacity(n_max + 1);
        let mut inv_sqrt_n = Vec::with_capacity(n_max + 1);
        ln_n.push(0.0);
        inv_sqrt_n.push(0.0);
        for n in 1..=n_max {
            ln_n.push((n as f64).ln_x());
            inv_sqrt_n.push(1.0 / (n as f64).sqrt_x());
        }
        Ok(Self {
            t_max,
            ln_n,
            inv_sqrt_n,
            rs_coeffs: rs::RsCoeffs::build(),
        })
    }

    /// Largest ordinate this engine can evaluate.
    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    fn check_t(&self, t: f64) -> Result<()> {
        if t < 10.0 {
            return Err(Error::Domain(format!("t = {t} below the t >= 10 domain")));
        }
        if t > self.t_max {
            return Err(Error::Domain(format!(
                "t = {t} above engine height {}",
                self.t_max
            )));
        }
        Ok(())
    }

    /// Riemann–Siegel phase `θ(t)`.
    pub fn theta(&self, t: f64) -> Result<f64> {
        riemann_siegel_theta(t)
    }

    /// Hardy `Z(t)`; real, with `|Z(t)| = |ζ(1/2+it)|`.
    pub fn z(&self, t: f64) -> Result<f64> {
        self.check_t(t)?;
        if t < Self::EM_CUTOFF {
            return Ok(em::z_euler_maclaurin(t));
        }
        Ok(rs::z_riemann_siegel(
            t,
            &self.ln_n,
            &self.inv_sqrt_n,
            &self.rs_coeffs,
        ))
    }

    /// Absolute-error envelope for [`Self::z`] at ordinate `t`.
    ///
    /// Combines the Riemann–Siegel remainder bound (three correction
    /// terms kept, so the two-term bound `0.011 t^{-7/4}` is a safe
    /// over-estimate) with the phase round-off floor that grows with
    /// `θ(t)`.
    pub fn z_error_envelope(&self, t: f64) -> f64 {
        if t < Self::EM_CUTOFF {
            return 1e-10;
        }
        let series = 0.011 * t.powf_x(-1.75);
        let nterms = (t / core::f64::consts::TAU).sqrt_x();
        let theta_mag = 0.5 * t * ((t / core::f64::consts::TAU).ln_x() - 1.0).abs_x() + 1.0;
        let roundoff = 4.0 * nterms.sqrt_x() * theta_mag * f64::EPSILON;
        (series + roundoff).max(1e-10)
    }
}

#[cfg(test)]
mod engine_tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn rejects_out_of_domain() {
        let e = ZetaEngine::new(1000.0).unwrap();
        assert!(matches!(e.z(5.0), Err(Error::Domain(_))));
        assert!(matches!(e.z(2000.0), Err(Error::Domain(_))));
        assert!(matches!(e.theta(5.0), Err(Error::Domain(_))));
    }

    #[test]
    fn both_paths_agree_at_the_dispatch_cutoff() {
        use crate::math::cis;
        let e = ZetaEngine::new(1000.0).unwrap();
        let t = ZetaEngine::EM_CUTOFF;
        let rs = e.z(t).unwrap(); // t >= cutoff dispatches to Riemann-Siegel
        let em = (cis(e.theta(t).unwrap()) * em::zeta_euler_maclaurin(Complex64::new(0.5, t))).re;
        assert!((rs - em).abs() < 1e-7, "paths disagree at cutoff: {rs} vs {em}");
    }
}
