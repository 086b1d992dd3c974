//! Pointwise statistics on the critical line.
//!
//! For a height parameter `T` and test function `φ`:
//!
//! * `N_φ(t) = Σ_γ φ((log T / 2π)(γ - t))` — smoothed zero count;
//! * `S_φ(t) = -(2/log T) Σ_n Λ(n)/√n φ̂(log n/log T) cos(t log n)`;
//! * `S*_φ(t)` — same with `Λ*` (primes and prime squares only);
//! * `P_x(t) = Σ_{p<=x} p^{-1/2-it}` — the prime Dirichlet polynomial;
//! * `log ζ(1/2+it)` — real part from `log |Z|`, imaginary part from
//!   the zero count: `π(N(t) - θ(t)/π - 1)`.
//!
//! The prime sums precompute `(log n, coefficient)` arrays per
//! `(T, φ)` pair since the moment loops evaluate them at `10^5`–`10^6`
//! ordinates.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::math::FloatExt;
use crate::primes::PrimeTable;
use crate::testfn::TestFunction;
use crate::zeta::{ZeroTable, ZetaEngine};
use crate::{Error, Result};

const PI: f64 = core::f64::consts::PI;
const TAU: f64 = core::f64::consts::TAU;

/// Exclusion radius around zeros for `log ζ` evaluation.
pub const ZERO_EXCLUSION: f64 = 1e-6;

/// Coefficient arrays for `S_φ` and `S*_φ` at fixed `(T, φ)`.
pub struct PreparedSums {
    ln_t: f64,
    /// `(log n, Λ*(n) φ̂(log n/log T) / √n)` over the support.
    star: Vec<(f64, f64)>,
    /// Same with the full von Mangoldt function.
    full: Vec<(f64, f64)>,
}

impl PreparedSums {
    pub fn new(t_big: f64, tf: &TestFunction, table: &PrimeTable) -> Result<Self> {
        if t_big < 3.0 {
            return Err(Error::Config(format!("height T = {t_big} too small")));
        }
        let ln_t = t_big.ln_x();
        let n_max = (tf.eta() * ln_t).exp_x();
        if n_max > table.limit() as f64 + 1.0 {
            return Err(Error::TableRange {
                requested: n_max,
                limit: table.limit() as f64,
            });
        }
        let mut star = Vec::new();
        let mut full = Vec::new();
        let mut n = 2u64;
        while (n as f64) < n_max && n <= table.limit() {
            if let Some((p, alpha)) = table.prime_power(n)? {
                let ln_n = (n as f64).ln_x();
                let w = tf.hat(ln_n / ln_t) / (n as f64).sqrt_x();
                if w != 0.0 {
                    let lp = (p as f64).ln_x();
                    full.push((ln_n, lp * w));
                    if alpha <= 2 {
                        star.push((ln_n, lp * w));
                    }
                }
            }
            n += 1;
        }
        Ok(Self { ln_t, star, full })
    }

    #[inline]
    fn eval(&self, terms: &[(f64, f64)], t: f64) -> f64 {
        let mut acc = 0.0;
        for &(ln_n, c) in terms {
            acc += c * (t * ln_n).cos_x();
        }
        -2.0 / self.ln_t * acc
    }

    /// `S_φ(t)`: exact finite sum (the transform support kills the tail).
    pub fn s_phi(&self, t: f64) -> f64 {
        self.eval(&self.full, t)
    }

    /// `S*_φ(t)`: the prime-square truncation.
    pub fn s_phi_star(&self, t: f64) -> f64 {
        self.eval(&self.star, t)
    }

    /// Number of terms in the truncated sum.
    pub fn star_len(&self) -> usize {
        self.star.len()
    }
}

/// The prime Dirichlet polynomial `P_x`.
pub struct PrimePoly {
    /// `(log p, p^{-1/2})` for `p <= x`.
    terms: Vec<(f64, f64)>,
    x: f64,
}

impl PrimePoly {
    pub fn new(x: f64, table: &PrimeTable) -> Result<Self> {
        if x > table.limit() as f64 {
            return Err(Error::TableRange {
                requested: x,
                limit: table.limit() as f64,
            });
        }
        let mut terms = Vec::new();
        for &p in table.primes() {
            if (p as f64) > x {
                break;
            }
            terms.push(((p as f64).ln_x(), 1.0 / (p as f64).sqrt_x()));
        }
        Ok(Self { terms, x })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `P_x(t) = Σ_{p<=x} p^{-1/2} e^{-it log p}`.
    pub fn eval(&self, t: f64) -> Complex64 {
        let mut re = 0.0;
        let mut im = 0.0;
        for &(lp, a) in &self.terms {
            let (s, c) = (t * lp).sin_cos_x();
            re += a * c;
            im -= a * s;
        }
        Complex64::new(re, im)
    }
}

/// The smoothed zero count around `t`.
pub struct ZeroStatistic<'a> {
    tf: &'a TestFunction,
    /// `log T / 2π`, the zero-spacing rescaling.
    scale: f64,
    /// Window half-width in `t` units covering the support of `φ`.
    window: f64,
}

impl<'a> ZeroStatistic<'a> {
    pub fn new(t_big: f64, tf: &'a TestFunction) -> Self {
        let scale = t_big.ln_x() / TAU;
        ZeroStatistic {
            tf,
            scale,
            window: tf.x_cut() / scale,
        }
    }

    /// Half-width of the zero window needed per evaluation.
    pub fn window(&self) -> f64 {
        self.window
    }

    /// `N_φ(t)`: sum of `φ` over certified zeros within the window.
    ///
    /// The truncated tail is below `tail_bound × local density` by
    /// construction of the cache.
    pub fn n_phi(&self, t: f64, zeros: &ZeroTable) -> Result<f64> {
        if !zeros.certified() {
            return Err(Error::Uncertified {
                lo: zeros.t_low(),
                hi: zeros.t_high(),
            });
        }
        let lo = t - self.window;
        let hi = t + self.window;
        if !zeros.covers(lo, hi) {
            return Err(Error::Coverage { lo, hi });
        }
        let mut acc = 0.0;
        for &g in zeros.zeros_in(lo, hi) {
            acc += self.tf.phi(self.scale * (g - t));
        }
        Ok(acc)
    }
}

/// One `log ζ` evaluation.
#[derive(Debug, Clone, Copy)]
pub struct ZetaSample {
    pub t: f64,
    /// `log |ζ(1/2+it)| = log |Z(t)|`.
    pub log_abs: f64,
    /// `Im log ζ(1/2+it) = π S(t)`, from the zero count.
    pub im_log: f64,
    /// Hardy `Z(t)`.
    pub z_value: f64,
}

impl ZetaSample {
    /// `log ζ` as a complex number.
    pub fn log_zeta(&self) -> Complex64 {
        Complex64::new(self.log_abs, self.im_log)
    }
}

/// Evaluate `log ζ(1/2+it)` using the branch defined by zero counting.
pub fn log_zeta(engine: &ZetaEngine, zeros: &ZeroTable, t: f64) -> Result<ZetaSample> {
    if !zeros.certified() {
        return Err(Error::Uncertified {
            lo: zeros.t_low(),
            hi: zeros.t_high(),
        });
    }
    let d = zeros.nearest_zero_distance(t);
    if d < ZERO_EXCLUSION {
        return Err(Error::SingularOrdinate {
            t,
            radius: ZERO_EXCLUSION,
        });
    }
    let z = engine.z(t)?;
    let theta = engine.theta(t)?;
    let count = zeros.count_below(t)? as f64;
    Ok(ZetaSample {
        t,
        log_abs: z.abs_x().ln_x(),
        im_log: PI * count - theta - PI,
        z_value: z,
    })
}

/// The four pointwise statistics at one ordinate, plus the
/// approximation error `E_x = log ζ - P_x`.
#[derive(Debug, Clone, Copy)]
pub struct StatisticPoint {
    pub t: f64,
    pub n_phi: f64,
    pub s_phi: f64,
    pub s_phi_star: f64,
    pub p_x: Complex64,
    pub e_x: Complex64,
}

/// Assemble a [`StatisticPoint`]; all preconditions of the parts apply.
pub fn statistic_point(
    engine: &ZetaEngine,
    zeros: &ZeroTable,
    sums: &PreparedSums,
    poly: &PrimePoly,
    zstat: &ZeroStatistic<'_>,
    t: f64,
) -> Result<StatisticPoint> {
    let sample = log_zeta(engine, zeros, t)?;
    let p_x = poly.eval(t);
    Ok(StatisticPoint {
        t,
        n_phi: zstat.n_phi(t, zeros)?,
        s_phi: sums.s_phi(t),
        s_phi_star: sums.s_phi_star(t),
        p_x,
        e_x: sample.log_zeta() - p_x,
    })
}
