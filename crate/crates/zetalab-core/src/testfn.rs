//! Admissible test functions: even, real `φ` with smooth, compactly
//! supported Fourier transform `φ̂` of support radius `eta`.
//!
//! Convention: `φ̂(u) = ∫ φ(x) e^{-2πi x u} dx`, so
//! `φ(x) = ∫ φ̂(u) e^{2πi x u} du`, `φ(0) = ∫ φ̂` and `φ̂(0) = ∫ φ`.
//!
//! Three families are built in:
//!
//! * `triangle_hat` — `φ̂(u) = max(0, 1 - |u|/η)`; not smooth, kept
//!   because `φ(x) = η (sin(πηx)/(πηx))²` in closed form makes it the
//!   exact oracle of choice. Its `φ` decays only like `x^{-2}`, so
//!   zero-window truncation is flagged via [`TestFunction::tail_bound`].
//! * `smooth_bump_hat` — `φ̂(u) = exp(-1/(1-(u/η)²))` on `|u| < η`.
//! * `bump_squared_hat` — `φ̂ = b * b` (self-convolution of the
//!   half-width bump), which makes `φ = (inverse transform of b)² >= 0`.
//!
//! `φ` is cached on a dense grid with cubic interpolation between
//! nodes; the moment loops evaluate it thousands of times per ordinate.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::math::{adaptive_simpson, FloatExt};
use crate::{Error, Result};

const TAU: f64 = core::f64::consts::TAU;
/// |φ| threshold defining the truncation radius.
const PHI_TRUNC: f64 = 1e-9;
/// Hard cap on the truncation radius (slow-decay families).
const X_CAP: f64 = 400.0;
/// φ cache spacing.
const PHI_DX: f64 = 1.0 / 128.0;

/// Built-in family tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    TriangleHat,
    SmoothBumpHat,
    BumpSquaredHat,
    /// Constructed from caller-supplied `φ̂` samples.
    Custom,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::TriangleHat => "triangle_hat",
            Family::SmoothBumpHat => "smooth_bump_hat",
            Family::BumpSquaredHat => "bump_squared_hat",
            Family::Custom => "custom",
        }
    }

    /// Parse a config-file family name.
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "triangle_hat" => Family::TriangleHat,
            "smooth_bump_hat" => Family::SmoothBumpHat,
            "bump_squared_hat" => Family::BumpSquaredHat,
            other => {
                return Err(Error::Config(format!(
                    "unknown test function family '{other}'"
                )))
            }
        })
    }
}

/// Support regimes for the various moment statements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupportMode {
    /// Joint moments, unconditional: `η < 2/(k+2)` (no condition at k=0).
    Unconditional,
    /// Imaginary-part moments under RH: `η < 2/k` (no condition at k=0).
    RhImaginary,
    /// Correlation of log zeta with the zero statistic: `η < 1`.
    Correlation,
    /// Pure centered-count moments: `η < 2/k` (no condition at k=0).
    HughesRudnick,
}

enum HatEval {
    Triangle,
    SmoothBump,
    /// Uniform samples of `φ̂` on `[0, η]` (even extension implied).
    Grid { values: Vec<f64>, du: f64 },
}

/// A fully cached admissible pair `(φ, φ̂)`.
pub struct TestFunction {
    family: Family,
    eta: f64,
    phi0: f64,
    hat0: f64,
    sigma_sq: f64,
    hat: HatEval,
    /// `φ(i · PHI_DX)` for `i = 0..`, even extension implied.
    phi_grid: Vec<f64>,
    x_cut: f64,
    tail_bound: f64,
}

impl core::fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("TestFunction")
            .field("family", &self.family.name())
            .field("eta", &self.eta)
            .field("phi0", &self.phi0)
            .field("hat0", &self.hat0)
            .field("sigma_sq", &self.sigma_sq)
            .field("x_cut", &self.x_cut)
            .finish()
    }
}

fn check_eta(eta: f64) -> Result<()> {
    if !(eta > 0.0 && eta <= 2.0) {
        return Err(Error::Config(format!(
            "support radius eta = {eta} outside (0, 2]"
        )));
    }
    Ok(())
}

/// The smooth bump on `(-1, 1)`, zero outside.
#[inline]
fn bump(v: f64) -> f64 {
    let v2 = v * v;
    if v2 >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - v2)).exp_x()
    }
}

impl TestFunction {
    /// Build one of the named families.
    pub fn new(family: Family, eta: f64) -> Result<Self> {
        check_eta(eta)?;
        let hat = match family {
            Family::TriangleHat => HatEval::Triangle,
            Family::SmoothBumpHat => HatEval::SmoothBump,
            Family::BumpSquaredHat => HatEval::Grid {
                values: convolve_half_bump(eta),
                du: eta / 4096.0,
            },
            Family::Custom => {
                return Err(Error::Config(
                    "use TestFunction::custom for caller-supplied transforms".into(),
                ))
            }
        };
        Self::finish(family, eta, hat)
    }

    /// Build from `φ̂` samples on a uniform grid over `[0, eta]`
    /// (the transform is extended evenly). At least 64 samples.
    pub fn custom(hat_samples: Vec<f64>, eta: f64) -> Result<Self> {
        check_eta(eta)?;
        if hat_samples.len() < 64 {
            return Err(Error::Config("need at least 64 transform samples".into()));
        }
        let du = eta / (hat_samples.len() - 1) as f64;
        Self::finish(
            Family::Custom,
            eta,
            HatEval::Grid {
                values: hat_samples,
                du,
            },
        )
    }

    fn finish(family: Family, eta: f64, hat: HatEval) -> Result<Self> {
        let mut tf = TestFunction {
            family,
            eta,
            phi0: 0.0,
            hat0: 0.0,
            sigma_sq: 0.0,
            hat,
            phi_grid: Vec::new(),
            x_cut: 0.0,
            tail_bound: 0.0,
        };
        tf.hat0 = tf.hat(0.0);
        tf.phi0 = 2.0 * adaptive_simpson(|u| tf.hat(u), 0.0, eta, 1e-12);
        tf.sigma_sq = tf.integrate_sigma_sq();
        tf.build_phi_cache();
        Ok(tf)
    }

    fn integrate_sigma_sq(&self) -> f64 {
        // ∫ min(|u|,1) φ̂² du, split at the kink when η > 1.
        let split = self.eta.min(1.0);
        let inner = adaptive_simpson(|u| u * self.hat(u) * self.hat(u), 0.0, split, 1e-13);
        let outer = if self.eta > 1.0 {
            adaptive_simpson(|u| self.hat(u) * self.hat(u), 1.0, self.eta, 1e-13)
        } else {
            0.0
        };
        2.0 * (inner + outer)
    }

    /// Evaluate `φ` by quadrature of the inverse transform (no cache).
    fn phi_quadrature(&self, x: f64) -> f64 {
        2.0 * adaptive_simpson(|u| self.hat(u) * (TAU * u * x).cos_x(), 0.0, self.eta, 1e-11)
    }

    fn build_phi_cache(&mut self) {
        if self.family == Family::TriangleHat {
            // Closed form: φ(x) = η sinc²(πηx); only the truncation
            // radius needs deciding. |φ| first drops below the
            // threshold where the envelope η/(πηx)² does.
            let x_full = (self.eta / PHI_TRUNC).sqrt_x() / (core::f64::consts::PI * self.eta);
            self.x_cut = x_full.min(X_CAP);
            // Integrated tail of η/(πηx)² past the cut, both sides.
            self.tail_bound = 2.0 / (core::f64::consts::PI.powi_x(2) * self.eta * self.x_cut);
            return;
        }
        // Smooth families: march outward until |φ| stays below the
        // threshold for a two-unit stretch.
        let mut grid = Vec::with_capacity(4096);
        let mut i = 0usize;
        let mut quiet = 0usize;
        let quiet_needed = (2.0 / PHI_DX) as usize;
        loop {
            let x = i as f64 * PHI_DX;
            let v = self.phi_quadrature(x);
            grid.push(v);
            if v.abs_x() < PHI_TRUNC {
                quiet += 1;
            } else {
                quiet = 0;
            }
            if (quiet >= quiet_needed && x > 4.0) || x >= X_CAP {
                break;
            }
            i += 1;
        }
        self.x_cut = (grid.len() - 1) as f64 * PHI_DX;
        self.tail_bound = if self.x_cut >= X_CAP {
            5.0 * grid.last().copied().unwrap_or(0.0).abs_x() * self.x_cut
        } else {
            // Below threshold over the trailing stretch; the remaining
            // mass is threshold-scale.
            PHI_TRUNC * 2.0 * self.x_cut
        };
        self.phi_grid = grid;
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Support radius of `φ̂`.
    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// `φ(0) = ∫ φ̂`.
    pub fn phi0(&self) -> f64 {
        self.phi0
    }

    /// `φ̂(0) = ∫ φ` — the mean of the smoothed zero count.
    pub fn hat0(&self) -> f64 {
        self.hat0
    }

    /// `σ_φ² = ∫ min(|u|,1) φ̂(u)² du`.
    pub fn sigma_sq(&self) -> f64 {
        self.sigma_sq
    }

    /// Truncation radius: `φ` is treated as zero for `|x| > x_cut`.
    pub fn x_cut(&self) -> f64 {
        self.x_cut
    }

    /// Bound on the neglected `∫ |φ|` mass past the truncation radius.
    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// `φ̂(u)`.
    pub fn hat(&self, u: f64) -> f64 {
        let a = u.abs_x();
        if a >= self.eta {
            return 0.0;
        }
        match &self.hat {
            HatEval::Triangle => 1.0 - a / self.eta,
            HatEval::SmoothBump => bump(a / self.eta),
            HatEval::Grid { values, du } => cubic_even(values, *du, a, 0.0),
        }
    }

    /// `φ(x)` from the cache (cubic interpolation, even extension).
    pub fn phi(&self, x: f64) -> f64 {
        let a = x.abs_x();
        if a > self.x_cut {
            return 0.0;
        }
        if self.family == Family::TriangleHat {
            return triangle_phi(self.eta, a);
        }
        cubic_even(&self.phi_grid, PHI_DX, a, 0.0)
    }

    /// Support validation for the requested statistic.
    ///
    /// Moment modes require even `k`; `k = 0` imposes no condition
    /// except in correlation mode, which ignores `k` entirely.
    pub fn validate_support(&self, k: u32, mode: SupportMode) -> Result<bool> {
        if mode == SupportMode::Correlation {
            return Ok(self.eta < 1.0);
        }
        if k % 2 == 1 {
            return Err(Error::Parity(format!(
                "odd zero-statistic order k = {k} in a moment mode"
            )));
        }
        if k == 0 {
            return Ok(true);
        }
        let kf = k as f64;
        Ok(match mode {
            SupportMode::Unconditional => self.eta < 2.0 / (kf + 2.0),
            SupportMode::RhImaginary | SupportMode::HughesRudnick => self.eta < 2.0 / kf,
            SupportMode::Correlation => unreachable!(),
        })
    }

    /// `∫ φ̂²` and `∫ φ²` by quadrature, for Parseval checks.
    pub fn parseval_pair(&self) -> (f64, f64) {
        let hat_sq = 2.0 * adaptive_simpson(|u| self.hat(u) * self.hat(u), 0.0, self.eta, 1e-12);
        let phi_sq = 2.0
            * adaptive_simpson(
                |x| {
                    let p = self.phi(x);
                    p * p
                },
                0.0,
                self.x_cut,
                1e-10,
            );
        (hat_sq, phi_sq)
    }

    /// Human-readable tag for reports.
    pub fn describe(&self) -> String {
        format!("{}(eta={})", self.family.name(), self.eta)
    }
}

fn triangle_phi(eta: f64, x: f64) -> f64 {
    if x == 0.0 {
        return eta;
    }
    let s = (core::f64::consts::PI * eta * x).sin_x() / (core::f64::consts::PI * eta * x);
    eta * s * s
}

/// Samples of `(b * b)(u)` on `[0, η]` where `b` is the bump scaled to
/// support `(-η/2, η/2)`.
fn convolve_half_bump(eta: f64) -> Vec<f64> {
    let half = 0.5 * eta;
    let n = 4097usize;
    let du = eta / (n - 1) as f64;
    (0..n)
        .map(|i| {
            let u = i as f64 * du;
            let lo = (u - half).max(-half);
            let hi = half.min(u + half);
            if lo >= hi {
                return 0.0;
            }
            adaptive_simpson(|v| bump(v / half) * bump((u - v) / half), lo, hi, 1e-13)
        })
        .collect()
}

/// Catmull-Rom interpolation on a uniform grid of an even function
/// sampled at `x >= 0`; `beyond` is returned past the last node.
fn cubic_even(values: &[f64], dx: f64, x: f64, beyond: f64) -> f64 {
    let pos = x / dx;
    let i = pos.floor_x() as isize;
    let t = pos - i as f64;
    let n = values.len() as isize;
    let fetch = |j: isize| -> f64 {
        let k = j.abs();
        if k >= n {
            beyond
        } else {
            values[k as usize]
        }
    };
    let p0 = fetch(i - 1);
    let p1 = fetch(i);
    let p2 = fetch(i + 1);
    let p3 = fetch(i + 2);
    p1 + 0.5
        * t
        * (p2 - p0 + t * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 + t * (3.0 * (p1 - p2) + p3 - p0)))
}
