//! Quadrature of ordinate averages `(1/T) ∫_T^{2T} f(t) dt`.
//!
//! Two modes:
//!
//! * `full_grid` — composite midpoint rule with at least eight points
//!   per mean zero gap; deterministic, zero standard error reported.
//! * `stratified_random` — one uniform draw per stratum of an
//!   `M`-fold split of `[T, 2T]`, seeded per stratum so the sample set
//!   is independent of worker count; the jackknife standard error of
//!   the mean is reported.
//!
//! Sample values are accumulated by pairwise summation in stratum
//! order, so results are bit-identical between serial and parallel
//! runs.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::math::{pairwise_sum, pairwise_sum_complex, par_map_indexed, u64_to_unit, FloatExt};
use crate::zeta::{mean_gap, ZeroTable};
use crate::{Error, Result};

const TAU: f64 = core::f64::consts::TAU;

/// Sampling strategy for ordinate averages.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuadratureMode {
    FullGrid,
    StratifiedRandom,
}

/// Discretization parameters.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureSpec {
    pub mode: QuadratureMode,
    /// Stratified mode: number of strata/samples.
    pub points: usize,
    /// Full-grid mode: samples per mean gap `2π/log T` (>= 8).
    pub samples_per_gap: f64,
    /// Stream seed for stratified draws.
    pub seed: u64,
}

impl QuadratureSpec {
    pub fn stratified(points: usize, seed: u64) -> Self {
        QuadratureSpec {
            mode: QuadratureMode::StratifiedRandom,
            points,
            samples_per_gap: 8.0,
            seed,
        }
    }

    pub fn full_grid(samples_per_gap: f64) -> Self {
        QuadratureSpec {
            mode: QuadratureMode::FullGrid,
            points: 0,
            samples_per_gap,
            seed: 0,
        }
    }

    fn validate(&self) -> Result<()> {
        match self.mode {
            QuadratureMode::StratifiedRandom => {
                if self.points < 1000 {
                    return Err(Error::Config(format!(
                        "stratified quadrature needs >= 1000 points, got {}",
                        self.points
                    )));
                }
            }
            QuadratureMode::FullGrid => {
                if self.samples_per_gap < 8.0 {
                    return Err(Error::Config(format!(
                        "full grid needs >= 8 samples per gap, got {}",
                        self.samples_per_gap
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Mean estimate with per-component jackknife standard errors.
#[derive(Debug, Clone, Copy)]
pub struct IntegralEstimate {
    pub value: Complex64,
    pub se_re: f64,
    pub se_im: f64,
    pub n: usize,
}

impl IntegralEstimate {
    /// Combined standard error.
    pub fn stderr(&self) -> f64 {
        (self.se_re * self.se_re + self.se_im * self.se_im).sqrt_x()
    }
}

/// The sample ordinates the spec induces over `[T, 2T]`. When a zero
/// table is supplied, ordinates colliding with a zero are shifted by
/// `+1e-5` mean gaps.
pub fn sample_ordinates(
    t_big: f64,
    spec: &QuadratureSpec,
    zeros: Option<&ZeroTable>,
) -> Result<Vec<f64>> {
    spec.validate()?;
    let n = match spec.mode {
        QuadratureMode::FullGrid => {
            let step = (TAU / t_big.ln_x()) / spec.samples_per_gap;
            (t_big / step).ceil_x() as usize
        }
        QuadratureMode::StratifiedRandom => spec.points,
    };
    let seed = spec.seed;
    let mode = spec.mode;
    let ts = par_map_indexed(n, move |i| {
        let mut t = match mode {
            QuadratureMode::FullGrid => t_big + (i as f64 + 0.5) * t_big / n as f64,
            QuadratureMode::StratifiedRandom => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(i as u64);
                let u = u64_to_unit(rng.next_u64());
                t_big + (i as f64 + u) * t_big / n as f64
            }
        };
        if let Some(z) = zeros {
            if z.covers(t, t) && z.nearest_zero_distance(t) < 1e-6 {
                t += 1e-5 * mean_gap(t);
            }
        }
        t
    });
    Ok(ts)
}

/// Estimate `(1/T) ∫_T^{2T} f(t) dt`.
///
/// A supplied zero table must be certified (pass `None` for integrands
/// that never touch zeros); integrand failures propagate and
/// non-finite values surface as [`Error::PoisonedSample`] with the
/// offending ordinate.
pub fn integrate<F>(
    f: F,
    t_big: f64,
    spec: &QuadratureSpec,
    zeros: Option<&ZeroTable>,
) -> Result<IntegralEstimate>
where
    F: Fn(f64) -> Result<Complex64> + Sync,
{
    if let Some(z) = zeros {
        if !z.certified() {
            return Err(Error::Uncertified {
                lo: z.t_low(),
                hi: z.t_high(),
            });
        }
    }
    let ts = sample_ordinates(t_big, spec, zeros)?;
    let samples: Vec<Result<Complex64>> = par_map_indexed(ts.len(), |i| {
        let t = ts[i];
        match f(t) {
            Ok(v) if v.re.is_finite() && v.im.is_finite() => Ok(v),
            Ok(_) => Err(Error::PoisonedSample { t }),
            Err(e) => Err(e),
        }
    });
    let mut values = Vec::with_capacity(samples.len());
    for s in samples {
        values.push(s?);
    }
    Ok(reduce(&values, spec.mode))
}

fn reduce(values: &[Complex64], mode: QuadratureMode) -> IntegralEstimate {
    let n = values.len();
    let mean = pairwise_sum_complex(values) / n as f64;
    if mode == QuadratureMode::FullGrid {
        return IntegralEstimate {
            value: mean,
            se_re: 0.0,
            se_im: 0.0,
            n,
        };
    }
    // Delete-one jackknife of the mean reduces to s/sqrt(n) for a
    // linear statistic; computed pairwise for determinism.
    let dev_re: Vec<f64> = values.iter().map(|v| (v.re - mean.re) * (v.re - mean.re)).collect();
    let dev_im: Vec<f64> = values.iter().map(|v| (v.im - mean.im) * (v.im - mean.im)).collect();
    let var_re = pairwise_sum(&dev_re) / ((n - 1) as f64 * n as f64);
    let var_im = pairwise_sum(&dev_im) / ((n - 1) as f64 * n as f64);
    IntegralEstimate {
        value: mean,
        se_re: var_re.sqrt_x(),
        se_im: var_im.sqrt_x(),
        n,
    }
}
