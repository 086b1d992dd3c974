//! Moment experiments over `[T, 2T]`: joint weighted moments, the
//! log-zeta/zero-count correlation, Dirichlet-twist integrals, weighted
//! sampling, and weighted empirical CDF distances.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::diag::{self, RelationSums};
use crate::math::{cis, cpowi, normal_cdf, u64_to_unit, FloatExt};
use crate::primes::PrimeTable;
use crate::quad::{integrate, sample_ordinates, IntegralEstimate, QuadratureSpec};
use crate::stats::{log_zeta, PreparedSums, PrimePoly, ZeroStatistic};
use crate::testfn::{SupportMode, TestFunction};
use crate::zeta::{ZeroTable, ZetaEngine};
use crate::{Error, Result};

/// Which integrand family a joint moment uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegrandMode {
    /// `(log ζ)^h (conj log ζ)^ℓ (N_φ - φ̂(0))^k`.
    ZetaNphi,
    /// `(log ζ)^h (conj log ζ)^ℓ (S*_φ)^k`.
    ZetaSstar,
    /// `P_x^h (conj P_x)^ℓ (S*_φ)^k`.
    Dirichlet,
}

impl IntegrandMode {
    pub fn label(self) -> &'static str {
        match self {
            IntegrandMode::ZetaNphi => "zeta_nphi",
            IntegrandMode::ZetaSstar => "zeta_sstar",
            IntegrandMode::Dirichlet => "dirichlet",
        }
    }
}

/// One estimated moment with both predictions.
#[derive(Debug, Clone, Copy)]
pub struct MomentReport {
    pub h: u32,
    pub l: u32,
    pub k: u32,
    pub t_big: f64,
    pub x: f64,
    pub eta: f64,
    pub empirical: Complex64,
    pub se_re: f64,
    pub se_im: f64,
    pub n_samples: usize,
    pub finite_t_prediction: f64,
    pub asymptotic_prediction: f64,
    pub mode: &'static str,
    pub seed: u64,
}

impl MomentReport {
    pub fn stderr(&self) -> f64 {
        (self.se_re * self.se_re + self.se_im * self.se_im).sqrt_x()
    }
}

/// The correlation experiment output.
#[derive(Debug, Clone, Copy)]
pub struct CorrelationReport {
    pub t_big: f64,
    pub x: f64,
    pub eta: f64,
    pub empirical: Complex64,
    pub se_re: f64,
    pub se_im: f64,
    pub n_samples: usize,
    /// `-(1/log T) Σ Λ(n)²/(n log n) φ̂(log n / log T)`.
    pub finite_t_prediction: f64,
    /// `-φ(0)/2`.
    pub asymptotic_prediction: f64,
    pub corr_coeff_empirical: f64,
    /// `-φ(0) / (2 σ_φ sqrt(log log T))`.
    pub corr_coeff_predicted: f64,
    pub log_second_moment: f64,
    pub nphi_second_moment: f64,
    pub seed: u64,
}

/// Twisted first-moment check `(1/T)∫ log ζ · n^{±it} dt`.
#[derive(Debug, Clone, Copy)]
pub struct GoldstonCheck {
    pub n: u64,
    pub plus: Complex64,
    pub plus_se: (f64, f64),
    pub minus: Complex64,
    pub minus_se: (f64, f64),
    /// `Λ(n)/(√n log n)` — the `n^{+it}` main term; the `n^{-it}`
    /// variant predicts zero.
    pub prediction: f64,
}

/// Ordinates with weights `|N_φ - φ̂(0)|^k`.
#[derive(Debug, Clone)]
pub struct WeightedSample {
    pub k: u32,
    pub ordinates: Vec<f64>,
    pub weights: Vec<f64>,
    /// Mean weight: the finite-height normalizing constant.
    pub normalizer: f64,
    pub seed: u64,
}

impl WeightedSample {
    /// Kish effective sample size `(Σw)²/Σw²`.
    pub fn effective_samples(&self) -> f64 {
        let sum: f64 = self.weights.iter().sum();
        let sq: f64 = self.weights.iter().map(|w| w * w).sum();
        if sq == 0.0 {
            0.0
        } else {
            sum * sum / sq
        }
    }

    /// Resample ordinates by inverse CDF on the discretized measure;
    /// deterministic for a fixed seed.
    pub fn resample(&self, count: usize, seed: u64) -> Result<Vec<f64>> {
        let total: f64 = self.weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::DegenerateMeasure);
        }
        let mut cum = Vec::with_capacity(self.weights.len());
        let mut acc = 0.0;
        for w in &self.weights {
            acc += w / total;
            cum.push(acc);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            let u = u64_to_unit(rng.next_u64());
            let idx = cum.partition_point(|&c| c < u).min(cum.len() - 1);
            out.push(self.ordinates[idx]);
        }
        Ok(out)
    }
}

/// Normalized statistics for weighted CDF comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CdfStatistic {
    /// `Im log ζ / sqrt(log log T / 2)` against `N(0,1)`.
    ImLogNorm,
    /// Each of `Re`/`Im` of `log ζ / sqrt(log log T)` against `N(0,1/2)`.
    ComplexLogNorm,
}

impl CdfStatistic {
    pub fn label(self) -> &'static str {
        match self {
            CdfStatistic::ImLogNorm => "im_log_norm",
            CdfStatistic::ComplexLogNorm => "complex_log_norm",
        }
    }
}

/// Kolmogorov distance report for a weighted sample.
#[derive(Debug, Clone, Copy)]
pub struct CdfDistanceReport {
    pub statistic: &'static str,
    /// Primary distance (max over parts for the complex statistic).
    pub distance: f64,
    pub re_distance: f64,
    pub im_distance: f64,
    pub effective_samples: f64,
}

/// Explicit-formula residual measurement on an ordinate grid.
#[derive(Debug, Clone, Copy)]
pub struct EfResidualReport {
    pub t_big: f64,
    pub eta: f64,
    pub n_points: usize,
    /// RMS of `N_φ(t) - φ̂(0) - S_φ(t)`.
    pub rms: f64,
    pub mean_residual: f64,
    /// `rms × log T`: the empirically fitted residual constant.
    pub fitted_constant: f64,
    /// Sup over the grid of `|S_φ - S*_φ|`.
    pub sup_star_diff: f64,
}

/// Everything a moment experiment needs, wired once per `(T, x, φ)`.
///
/// `zeros` may be omitted for experiments whose integrands never touch
/// zeros (pure Dirichlet-polynomial moments); any path that needs
/// `log ζ` or `N_φ` then fails with a coverage error.
pub struct MomentLab<'a> {
    engine: &'a ZetaEngine,
    zeros: Option<&'a ZeroTable>,
    primes: &'a PrimeTable,
    tf: &'a TestFunction,
    t_big: f64,
    x: f64,
    sums: PreparedSums,
    poly: PrimePoly,
    zstat: ZeroStatistic<'a>,
}

impl<'a> MomentLab<'a> {
    pub fn new(
        engine: &'a ZetaEngine,
        zeros: Option<&'a ZeroTable>,
        primes: &'a PrimeTable,
        tf: &'a TestFunction,
        t_big: f64,
        x: f64,
    ) -> Result<Self> {
        if t_big < 1e3 {
            return Err(Error::Config(format!(
                "experiment height T = {t_big} below 10^3"
            )));
        }
        let sums = PreparedSums::new(t_big, tf, primes)?;
        let poly = PrimePoly::new(x, primes)?;
        let zstat = ZeroStatistic::new(t_big, tf);
        Ok(Self {
            engine,
            zeros,
            primes,
            tf,
            t_big,
            x,
            sums,
            poly,
            zstat,
        })
    }

    pub fn t_big(&self) -> f64 {
        self.t_big
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn test_function(&self) -> &TestFunction {
        self.tf
    }

    pub fn prepared_sums(&self) -> &PreparedSums {
        &self.sums
    }

    pub fn zero_window(&self) -> f64 {
        self.zstat.window()
    }

    fn require_zeros(&self) -> Result<&'a ZeroTable> {
        self.zeros.ok_or(Error::Coverage {
            lo: self.t_big,
            hi: 2.0 * self.t_big,
        })
    }

    fn log_zeta_at(&self, t: f64) -> Result<Complex64> {
        Ok(log_zeta(self.engine, self.require_zeros()?, t)?.log_zeta())
    }

    fn centered_nphi(&self, t: f64) -> Result<f64> {
        Ok(self.zstat.n_phi(t, self.require_zeros()?)? - self.tf.hat0())
    }

    /// `N_φ(t) - φ̂(0)` at a single ordinate.
    pub fn centered_nphi_at(&self, t: f64) -> Result<f64> {
        self.centered_nphi(t)
    }

    /// Relation sums at this lab's `(x, T, φ)`.
    pub fn relation_sums(&self) -> Result<RelationSums> {
        diag::relation_sums(self.x, self.t_big, self.tf, self.primes)
    }

    /// Average `f` over `[T, 2T]` with this lab's zero table.
    pub fn integrate<F>(&self, f: F, spec: &QuadratureSpec) -> Result<IntegralEstimate>
    where
        F: Fn(f64) -> Result<Complex64> + Sync,
    {
        integrate(f, self.t_big, spec, self.zeros)
    }

    /// Whether this lab was wired with a zero table.
    pub fn has_zeros(&self) -> bool {
        self.zeros.is_some()
    }

    /// Joint moment `M(h, ℓ, k)` in the requested integrand mode.
    pub fn joint_moment(
        &self,
        h: u32,
        l: u32,
        k: u32,
        mode: IntegrandMode,
        spec: &QuadratureSpec,
    ) -> Result<MomentReport> {
        if h + l + k > 8 {
            return Err(Error::Budget(format!(
                "moment orders h+l+k = {} beyond the supported cap 8",
                h + l + k
            )));
        }
        let support = match mode {
            IntegrandMode::ZetaNphi | IntegrandMode::ZetaSstar => SupportMode::Unconditional,
            IntegrandMode::Dirichlet => SupportMode::HughesRudnick,
        };
        if !self.tf.validate_support(k, support)? {
            return Err(Error::Config(format!(
                "support radius eta = {} too wide for k = {k} in {} mode",
                self.tf.eta(),
                mode.label()
            )));
        }
        let est = self.integrate(
            |t| {
                let zpow = match mode {
                    IntegrandMode::Dirichlet => {
                        let p = self.poly.eval(t);
                        cpowi(p, h) * cpowi(p.conj(), l)
                    }
                    _ if h + l == 0 => Complex64::new(1.0, 0.0),
                    _ => {
                        let lz = self.log_zeta_at(t)?;
                        cpowi(lz, h) * cpowi(lz.conj(), l)
                    }
                };
                if k == 0 {
                    return Ok(zpow);
                }
                let w = match mode {
                    IntegrandMode::ZetaNphi => self.centered_nphi(t)?,
                    _ => self.sums.s_phi_star(t),
                };
                Ok(zpow * w.powi_x(k as i32))
            },
            spec,
        )?;
        let sums = self.relation_sums()?;
        Ok(MomentReport {
            h,
            l,
            k,
            t_big: self.t_big,
            x: self.x,
            eta: self.tf.eta(),
            empirical: est.value,
            se_re: est.se_re,
            se_im: est.se_im,
            n_samples: est.n,
            finite_t_prediction: diag::predicted_moment(h, l, k, &sums),
            asymptotic_prediction: diag::asymptotic_prediction(h, l, k, self.t_big, self.tf),
            mode: mode.label(),
            seed: spec.seed,
        })
    }

    /// `(1/T)∫ (N_φ - φ̂(0))^k dt`: the pure centered-count moment,
    /// valid under the wider support `η < 2/k`.
    pub fn centered_count_moment(&self, k: u32, spec: &QuadratureSpec) -> Result<MomentReport> {
        if !self.tf.validate_support(k, SupportMode::HughesRudnick)? {
            return Err(Error::Config(format!(
                "support radius eta = {} too wide for centered k = {k} moments",
                self.tf.eta()
            )));
        }
        let est = self.integrate(
            |t| {
                let w = if k == 0 {
                    1.0
                } else {
                    self.centered_nphi(t)?.powi_x(k as i32)
                };
                Ok(Complex64::new(w, 0.0))
            },
            spec,
        )?;
        let sums = self.relation_sums()?;
        Ok(MomentReport {
            h: 0,
            l: 0,
            k,
            t_big: self.t_big,
            x: self.x,
            eta: self.tf.eta(),
            empirical: est.value,
            se_re: est.se_re,
            se_im: est.se_im,
            n_samples: est.n,
            finite_t_prediction: diag::predicted_moment(0, 0, k, &sums),
            asymptotic_prediction: diag::asymptotic_prediction(0, 0, k, self.t_big, self.tf),
            mode: "centered_count",
            seed: spec.seed,
        })
    }

    /// `(1/T)∫ (Im log ζ)^ℓ (N_φ - φ̂(0))^k dt` with its predictions.
    ///
    /// The finite-height prediction replaces `log log T` with the
    /// polynomial diagonal `Σ_{p<=x} 1/(2p)`, so it describes `Im P_x`
    /// rather than the full logarithm when `x` is small.
    pub fn imaginary_moment(
        &self,
        l: u32,
        k: u32,
        spec: &QuadratureSpec,
    ) -> Result<MomentReport> {
        if !self.tf.validate_support(k, SupportMode::RhImaginary)? {
            return Err(Error::Config(format!(
                "support radius eta = {} too wide for k = {k} imaginary moments",
                self.tf.eta()
            )));
        }
        let est = self.integrate(
            |t| {
                let lz = self.log_zeta_at(t)?;
                let w = if k == 0 { 1.0 } else { self.centered_nphi(t)?.powi_x(k as i32) };
                Ok(Complex64::new(lz.im.powi_x(l as i32) * w, 0.0))
            },
            spec,
        )?;
        let mu_l = diag::gaussian_moment(l);
        let mu_k = diag::gaussian_moment(k);
        let sig_k = self.tf.sigma_sq().powf_x(k as f64 / 2.0);
        let half_prime_sum = 0.5 * self.primes.prime_reciprocal_sum(self.x)?;
        let loglog = self.t_big.ln_x().ln_x();
        Ok(MomentReport {
            h: 0,
            l,
            k,
            t_big: self.t_big,
            x: self.x,
            eta: self.tf.eta(),
            empirical: est.value,
            se_re: est.se_re,
            se_im: est.se_im,
            n_samples: est.n,
            finite_t_prediction: mu_l * mu_k * sig_k * half_prime_sum.powf_x(l as f64 / 2.0),
            asymptotic_prediction: mu_l * mu_k * sig_k * loglog.powf_x(l as f64 / 2.0),
            mode: "imaginary",
            seed: spec.seed,
        })
    }

    /// Correlation of `log ζ` with the centered zero statistic.
    pub fn correlation_experiment(&self, spec: &QuadratureSpec) -> Result<CorrelationReport> {
        if !self.tf.validate_support(0, SupportMode::Correlation)? {
            return Err(Error::Config(format!(
                "correlation requires eta < 1, got {}",
                self.tf.eta()
            )));
        }
        let product = self.integrate(
            |t| {
                let lz = self.log_zeta_at(t)?;
                Ok(lz * self.centered_nphi(t)?)
            },
            spec,
        )?;
        let log_sq = self.integrate(
            |t| Ok(Complex64::new(self.log_zeta_at(t)?.norm_sqr(), 0.0)),
            spec,
        )?;
        let nphi_sq = self.integrate(
            |t| {
                let w = self.centered_nphi(t)?;
                Ok(Complex64::new(w * w, 0.0))
            },
            spec,
        )?;

        // Finite-height main term: -(1/log T) Σ Λ(n)²/(n log n) φ̂(log n/log T).
        let ln_t = self.t_big.ln_x();
        let n_max = (self.tf.eta() * ln_t).exp_x();
        let mut finite_t = 0.0;
        let mut n = 2u64;
        while (n as f64) < n_max {
            let lam = self.primes.von_mangoldt(n)?;
            if lam != 0.0 {
                let ln_n = (n as f64).ln_x();
                finite_t += lam * lam / (n as f64 * ln_n) * self.tf.hat(ln_n / ln_t);
            }
            n += 1;
        }
        finite_t = -finite_t / ln_t;

        let loglog = ln_t.ln_x();
        let sigma = self.tf.sigma_sq().sqrt_x();
        let denom = (log_sq.value.re * nphi_sq.value.re).sqrt_x();
        Ok(CorrelationReport {
            t_big: self.t_big,
            x: self.x,
            eta: self.tf.eta(),
            empirical: product.value,
            se_re: product.se_re,
            se_im: product.se_im,
            n_samples: product.n,
            finite_t_prediction: finite_t,
            asymptotic_prediction: -0.5 * self.tf.phi0(),
            corr_coeff_empirical: if denom > 0.0 {
                product.value.re / denom
            } else {
                0.0
            },
            corr_coeff_predicted: -self.tf.phi0() / (2.0 * sigma * loglog.sqrt_x()),
            log_second_moment: log_sq.value.re,
            nphi_second_moment: nphi_sq.value.re,
            seed: spec.seed,
        })
    }

    /// Twisted first moments `(1/T)∫ log ζ · n^{±it} dt`.
    pub fn goldston_check(&self, n: u64, spec: &QuadratureSpec) -> Result<GoldstonCheck> {
        if !(2..=self.t_big as u64).contains(&n) {
            return Err(Error::Config(format!(
                "twist index n = {n} outside [2, T]"
            )));
        }
        let ln_n = (n as f64).ln_x();
        let plus = self.integrate(
            |t| Ok(self.log_zeta_at(t)? * cis(t * ln_n)),
            spec,
        )?;
        let minus = self.integrate(
            |t| Ok(self.log_zeta_at(t)? * cis(-t * ln_n)),
            spec,
        )?;
        Ok(GoldstonCheck {
            n,
            plus: plus.value,
            plus_se: (plus.se_re, plus.se_im),
            minus: minus.value,
            minus_se: (minus.se_re, minus.se_im),
            prediction: self.primes.von_mangoldt(n)? / ((n as f64).sqrt_x() * ln_n),
        })
    }

    /// Ordinates sampled by the quadrature spec with weights
    /// `|N_φ(t) - φ̂(0)|^k`.
    pub fn weighted_sample(
        &self,
        k: u32,
        mode: SupportMode,
        spec: &QuadratureSpec,
    ) -> Result<WeightedSample> {
        if !self.tf.validate_support(k, mode)? {
            return Err(Error::Config(format!(
                "support radius eta = {} too wide for weight order k = {k}",
                self.tf.eta()
            )));
        }
        self.require_zeros()?;
        let ts = sample_ordinates(self.t_big, spec, self.zeros)?;
        let weights = crate::math::par_map_indexed(ts.len(), |i| -> Result<f64> {
            if k == 0 {
                return Ok(1.0);
            }
            Ok(self.centered_nphi(ts[i])?.abs_x().powi_x(k as i32))
        });
        let mut ws = Vec::with_capacity(weights.len());
        for w in weights {
            ws.push(w?);
        }
        let total: f64 = ws.iter().sum();
        if total <= 0.0 {
            return Err(Error::DegenerateMeasure);
        }
        Ok(WeightedSample {
            k,
            normalizer: total / ws.len() as f64,
            ordinates: ts,
            weights: ws,
            seed: spec.seed,
        })
    }

    /// Kolmogorov distance between the weighted empirical distribution
    /// of the normalized statistic and its Gaussian limit.
    pub fn weighted_cdf_distance(
        &self,
        sample: &WeightedSample,
        statistic: CdfStatistic,
    ) -> Result<CdfDistanceReport> {
        let effective = sample.effective_samples();
        if effective < 1000.0 {
            return Err(Error::InsufficientSamples {
                effective,
                required: 1000.0,
            });
        }
        let loglog = self.t_big.ln_x().ln_x();
        let samples = crate::math::par_map_indexed(sample.ordinates.len(), |i| {
            self.log_zeta_at(sample.ordinates[i])
        });
        let mut logs = Vec::with_capacity(samples.len());
        for s in samples {
            logs.push(s?);
        }
        match statistic {
            CdfStatistic::ImLogNorm => {
                let scale = (0.5 * loglog).sqrt_x();
                let values: Vec<f64> = logs.iter().map(|z| z.im / scale).collect();
                let d = weighted_ks(&values, &sample.weights, normal_cdf);
                Ok(CdfDistanceReport {
                    statistic: statistic.label(),
                    distance: d,
                    re_distance: d,
                    im_distance: d,
                    effective_samples: effective,
                })
            }
            CdfStatistic::ComplexLogNorm => {
                let scale = loglog.sqrt_x();
                let half_cdf = |x: f64| normal_cdf(x * core::f64::consts::SQRT_2);
                let re: Vec<f64> = logs.iter().map(|z| z.re / scale).collect();
                let im: Vec<f64> = logs.iter().map(|z| z.im / scale).collect();
                let dr = weighted_ks(&re, &sample.weights, half_cdf);
                let di = weighted_ks(&im, &sample.weights, half_cdf);
                Ok(CdfDistanceReport {
                    statistic: statistic.label(),
                    distance: dr.max(di),
                    re_distance: dr,
                    im_distance: di,
                    effective_samples: effective,
                })
            }
        }
    }

    /// Explicit-formula residual `N_φ - φ̂(0) - S_φ` on a deterministic
    /// grid of `n_points` ordinates in `[T, 2T]`.
    pub fn explicit_formula_residual(&self, n_points: usize) -> Result<EfResidualReport> {
        if n_points < 2 {
            return Err(Error::Config("residual grid needs >= 2 points".into()));
        }
        let table = self.require_zeros()?;
        let rows = crate::math::par_map_indexed(n_points, |i| -> Result<(f64, f64)> {
            let mut t = self.t_big * (1.0 + (i as f64 + 0.5) / n_points as f64);
            if table.nearest_zero_distance(t) < 1e-6 {
                t += 1e-5 * crate::zeta::mean_gap(t);
            }
            let r = self.centered_nphi(t)? - self.sums.s_phi(t);
            let sd = (self.sums.s_phi(t) - self.sums.s_phi_star(t)).abs_x();
            Ok((r, sd))
        });
        let mut sq = 0.0;
        let mut mean = 0.0;
        let mut sup = 0.0f64;
        for row in rows {
            let (r, sd) = row?;
            sq += r * r;
            mean += r;
            sup = sup.max(sd);
        }
        let rms = (sq / n_points as f64).sqrt_x();
        Ok(EfResidualReport {
            t_big: self.t_big,
            eta: self.tf.eta(),
            n_points,
            rms,
            mean_residual: mean / n_points as f64,
            fitted_constant: rms * self.t_big.ln_x(),
            sup_star_diff: sup,
        })
    }

    /// `(1/T)∫ (Re E_x)^{2m} dt` and `(1/T)∫ (Im E_x)^{2m} dt` for the
    /// approximation error `E_x = log ζ - P_x`. These stay bounded as
    /// `x` grows through small powers of `T`.
    pub fn approx_error_moment(
        &self,
        m: u32,
        spec: &QuadratureSpec,
    ) -> Result<(IntegralEstimate, IntegralEstimate)> {
        let re = self.integrate(
            |t| {
                let e = self.log_zeta_at(t)? - self.poly.eval(t);
                Ok(Complex64::new(e.re.powi_x(2 * m as i32), 0.0))
            },
            spec,
        )?;
        let im = self.integrate(
            |t| {
                let e = self.log_zeta_at(t)? - self.poly.eval(t);
                Ok(Complex64::new(e.im.powi_x(2 * m as i32), 0.0))
            },
            spec,
        )?;
        Ok((re, im))
    }

    /// `(1/T)∫ |P_x(t)|² dt` against the exact diagonal `Σ_{p<=x} 1/p`.
    pub fn dirichlet_second_moment(
        &self,
        spec: &QuadratureSpec,
    ) -> Result<(IntegralEstimate, f64)> {
        let est = self.integrate(
            |t| Ok(Complex64::new(self.poly.eval(t).norm_sqr(), 0.0)),
            spec,
        )?;
        Ok((est, self.primes.prime_reciprocal_sum(self.x)?))
    }
}

/// Kolmogorov distance between the weighted empirical CDF of `values`
/// and a reference CDF.
pub fn weighted_ks<F: Fn(f64) -> f64>(values: &[f64], weights: &[f64], cdf: F) -> f64 {
    assert_eq!(values.len(), weights.len());
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_unstable_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("finite values"));
    let total: f64 = weights.iter().sum();
    let mut cum = 0.0;
    let mut d = 0.0f64;
    for &i in &order {
        let f = cdf(values[i]);
        d = d.max((cum / total - f).abs_x());
        cum += weights[i];
        d = d.max((cum / total - f).abs_x());
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testfn::Family;
    use crate::zeta::find_zeros;
    use approx::assert_relative_eq;

    struct Fixture {
        engine: ZetaEngine,
        zeros: ZeroTable,
        primes: PrimeTable,
    }

    impl Fixture {
        fn engine_ref(&self) -> &ZetaEngine {
            &self.engine
        }
    }

    fn fixture() -> Fixture {
        let engine = ZetaEngine::new(4300.0).unwrap();
        // Covers [1000, 2000] plus the widest φ window used below
        // (the eta = 0.4 bump reaches ~100 ordinate units at T = 10³).
        let zeros = find_zeros(&engine, 850.0, 2150.0).unwrap();
        assert!(zeros.certified());
        let primes = PrimeTable::build(10_000).unwrap();
        Fixture {
            engine,
            zeros,
            primes,
        }
    }

    fn lab<'a>(fx: &'a Fixture, tf: &'a TestFunction, x: f64) -> MomentLab<'a> {
        MomentLab::new(&fx.engine, Some(&fx.zeros), &fx.primes, tf, 1000.0, x).unwrap()
    }

    #[test]
    fn unit_integrand_and_conjugation_symmetry() {
        let fx = fixture();
        let tf = TestFunction::new(Family::SmoothBumpHat, 0.4).unwrap();
        let lab = lab(&fx, &tf, 20.0);
        let spec = QuadratureSpec::stratified(1500, 11);
        let m000 = lab
            .joint_moment(0, 0, 0, IntegrandMode::ZetaNphi, &spec)
            .unwrap();
        assert_relative_eq!(m000.empirical.re, 1.0, epsilon = 1e-12);
        assert_eq!(m000.empirical.im, 0.0);

        // M(h,ℓ,k) = conj(M(ℓ,h,k)) exactly on the same sample set.
        let a = lab
            .joint_moment(2, 1, 2, IntegrandMode::ZetaNphi, &spec)
            .unwrap();
        let b = lab
            .joint_moment(1, 2, 2, IntegrandMode::ZetaNphi, &spec)
            .unwrap();
        assert_relative_eq!(a.empirical.re, b.empirical.re, epsilon = 1e-12);
        assert_relative_eq!(a.empirical.im, -b.empirical.im, epsilon = 1e-12);
    }

    #[test]
    fn dirichlet_pair_moment_matches_reciprocal_sum() {
        let fx = fixture();
        let tf = TestFunction::new(Family::SmoothBumpHat, 0.4).unwrap();
        let lab = lab(&fx, &tf, 50.0);
        let spec = QuadratureSpec::stratified(20_000, 5);
        let m = lab
            .joint_moment(1, 1, 0, IntegrandMode::Dirichlet, &spec)
            .unwrap();
        let exact = fx.primes.prime_reciprocal_sum(50.0).unwrap();
        // Off-diagonal terms are O(x/T); the estimate must sit within a
        // few standard errors plus that allowance.
        assert!(
            (m.empirical.re - exact).abs() < 4.0 * m.se_re + 0.05 * exact,
            "empirical {} vs exact {exact} (se {})",
            m.empirical.re,
            m.se_re
        );
        assert_relative_eq!(m.finite_t_prediction, exact, epsilon = 1e-12);
    }

    #[test]
    fn odd_imaginary_moment_is_noise_around_zero() {
        let fx = fixture();
        let tf = TestFunction::new(Family::SmoothBumpHat, 0.4).unwrap();
        let lab = lab(&fx, &tf, 20.0);
        let spec = QuadratureSpec::stratified(4000, 3);
        let m = lab.imaginary_moment(1, 0, &spec).unwrap();
        assert_eq!(m.finite_t_prediction, 0.0);
        assert_eq!(m.asymptotic_prediction, 0.0);
        assert!(
            m.empirical.re.abs() < 4.0 * m.se_re,
            "odd moment {} vs se {}",
            m.empirical.re,
            m.se_re
        );
        // Even case: the predictions are half the prime reciprocal sum
        // (the Im P_x diagonal) and log log T respectively.
        let m2 = lab.imaginary_moment(2, 0, &spec).unwrap();
        let half_sum = 0.5 * fx.primes.prime_reciprocal_sum(20.0).unwrap();
        approx::assert_relative_eq!(m2.finite_t_prediction, half_sum, epsilon = 1e-12);
        approx::assert_relative_eq!(
            m2.asymptotic_prediction,
            1000f64.ln().ln(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn degenerate_weights_refuse_resampling() {
        let sample = WeightedSample {
            k: 2,
            ordinates: alloc::vec![1000.0, 1001.0],
            weights: alloc::vec![0.0, 0.0],
            normalizer: 0.0,
            seed: 0,
        };
        assert!(matches!(
            sample.resample(10, 1),
            Err(Error::DegenerateMeasure)
        ));
    }

    #[test]
    fn support_violations_surface_as_config_errors() {
        let fx = fixture();
        let tf = TestFunction::new(Family::SmoothBumpHat, 1.2).unwrap();
        let lab = lab(&fx, &tf, 20.0);
        let spec = QuadratureSpec::stratified(1000, 3);
        assert!(matches!(
            lab.joint_moment(0, 0, 2, IntegrandMode::ZetaNphi, &spec),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            lab.joint_moment(0, 0, 3, IntegrandMode::ZetaNphi, &spec),
            Err(Error::Parity(_))
        ));
        assert!(matches!(
            lab.correlation_experiment(&spec),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn goldston_twists_at_moderate_height() {
        let fx = fixture();
        let tf = TestFunction::new(Family::SmoothBumpHat, 0.4).unwrap();
        let lab = lab(&fx, &tf, 20.0);
        let spec = QuadratureSpec::stratified(3000, 17);
        let g2 = lab.goldston_check(2, &spec).unwrap();
        assert_relative_eq!(g2.prediction, 1.0 / 2f64.sqrt(), epsilon = 1e-12);
        assert!(
            (g2.plus.re - g2.prediction).abs() < 5.0 * g2.plus_se.0 + 0.08,
            "n=2 twist {} vs {} (se {})",
            g2.plus.re,
            g2.prediction,
            g2.plus_se.0
        );
        // Non-prime-power index predicts zero.
        let g6 = lab.goldston_check(6, &spec).unwrap();
        assert_eq!(g6.prediction, 0.0);
        // n = 4: Λ(4)/(2 log 4) = 1/4.
        let g4 = lab.goldston_check(4, &spec).unwrap();
        assert_relative_eq!(g4.prediction, 0.25, epsilon = 1e-12);
        assert!(lab.goldston_check(1, &spec).is_err());
    }

    #[test]
    fn weighted_samples_are_deterministic_and_normalized() {
        let fx = fixture();
        let tf = TestFunction::new(Family::SmoothBumpHat, 0.4).unwrap();
        let lab = lab(&fx, &tf, 20.0);
        let spec = QuadratureSpec::stratified(1500, 23);
        let w0 = lab
            .weighted_sample(0, SupportMode::HughesRudnick, &spec)
            .unwrap();
        assert!(w0.weights.iter().all(|&w| w == 1.0));
        assert_relative_eq!(w0.normalizer, 1.0, epsilon = 1e-15);
        let w2a = lab
            .weighted_sample(2, SupportMode::HughesRudnick, &spec)
            .unwrap();
        let w2b = lab
            .weighted_sample(2, SupportMode::HughesRudnick, &spec)
            .unwrap();
        assert_eq!(w2a.ordinates, w2b.ordinates);
        assert_eq!(w2a.weights, w2b.weights);
        assert!(w2a.normalizer > 0.0);
        assert!(w2a.weights.iter().all(|&w| w >= 0.0));
        // Resampling is deterministic too.
        assert_eq!(
            w2a.resample(100, 7).unwrap(),
            w2b.resample(100, 7).unwrap()
        );
    }

    #[test]
    fn ks_distance_calibrates_on_true_normals() {
        // Box-Muller normals through the same weighted KS routine.
        let m = 20_000usize;
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut values = Vec::with_capacity(m);
        while values.len() < m {
            let u1 = u64_to_unit(rng.next_u64()).max(1e-12);
            let u2 = u64_to_unit(rng.next_u64());
            let r = (-2.0 * u1.ln()).sqrt();
            values.push(r * (core::f64::consts::TAU * u2).cos());
            values.push(r * (core::f64::consts::TAU * u2).sin());
        }
        values.truncate(m);
        let weights = alloc::vec![1.0; m];
        let d = weighted_ks(&values, &weights, normal_cdf);
        assert!(d < 2.0 / (m as f64).sqrt(), "distance {d}");
    }

    #[test]
    fn insufficient_effective_samples_error() {
        let mut weights = alloc::vec![0.0; 2000];
        weights[0] = 1.0;
        let sample = WeightedSample {
            k: 2,
            ordinates: (0..2000).map(|i| 1000.0 + i as f64 * 0.4).collect(),
            weights,
            normalizer: 1.0,
            seed: 0,
        };
        assert!(sample.effective_samples() < 2.0);
        let fx = fixture();
        let tf = TestFunction::new(Family::SmoothBumpHat, 0.4).unwrap();
        let lab = lab(&fx, &tf, 20.0);
        assert!(matches!(
            lab.weighted_cdf_distance(&sample, CdfStatistic::ImLogNorm),
            Err(Error::InsufficientSamples { .. })
        ));
    }

    #[test]
    fn explicit_formula_residual_is_logarithmically_small() {
        // The core consistency check of the whole pipeline: the zero
        // sum reproduces hat0 + prime sum with O(1/log T) residue.
        let fx = fixture();
        let tf = TestFunction::new(Family::SmoothBumpHat, 0.4).unwrap();
        let lab = lab(&fx, &tf, 20.0);
        let report = lab.explicit_formula_residual(400).unwrap();
        let budget = 5.0 / 1000f64.ln();
        assert!(
            report.rms <= budget,
            "rms {} above 5/log T = {budget}",
            report.rms
        );
        assert!(report.sup_star_diff <= 10.0 / 1000f64.ln());
    }

    #[test]
    fn approx_error_moments_stay_bounded_as_x_grows() {
        let fx = fixture();
        let tf = TestFunction::new(Family::SmoothBumpHat, 0.4).unwrap();
        let spec = QuadratureSpec::stratified(3000, 21);
        let mut second_moments = Vec::new();
        // x sweeping from the empty polynomial through a dozen primes.
        for x in [1.5, 3.0, 10.0, 40.0] {
            let lab =
                MomentLab::new(&fx.engine, Some(&fx.zeros), &fx.primes, &tf, 1000.0, x).unwrap();
            let (re, im) = lab.approx_error_moment(1, &spec).unwrap();
            assert!(re.value.re <= 10.0, "Re E_x second moment {}", re.value.re);
            assert!(im.value.re <= 10.0, "Im E_x second moment {}", im.value.re);
            second_moments.push(re.value.re + im.value.re);
        }
        // Longer polynomials absorb more of log zeta: |E_x|² should not
        // grow beyond noise as x increases.
        for w in second_moments.windows(2) {
            assert!(w[1] <= w[0] + 0.25, "second moment grew: {w:?}");
        }
        // With x < 2 the polynomial is empty and E_x is log zeta itself.
        let lab =
            MomentLab::new(&fx.engine, Some(&fx.zeros), &fx.primes, &tf, 1000.0, 1.5).unwrap();
        let (re, _) = lab.approx_error_moment(1, &spec).unwrap();
        let logsq = lab
            .integrate(
                |t| {
                    let z = log_zeta(fx.engine_ref(), &fx.zeros, t)?.log_zeta();
                    Ok(Complex64::new(z.re * z.re, 0.0))
                },
                &spec,
            )
            .unwrap();
        approx::assert_relative_eq!(re.value.re, logsq.value.re, epsilon = 1e-12);
    }

    #[test]
    fn dirichlet_mode_runs_without_a_zero_table() {
        let fx = fixture();
        let tf = TestFunction::new(Family::SmoothBumpHat, 0.4).unwrap();
        let lab = MomentLab::new(&fx.engine, None, &fx.primes, &tf, 1000.0, 30.0).unwrap();
        let spec = QuadratureSpec::stratified(2000, 4);
        let m = lab
            .joint_moment(1, 1, 0, IntegrandMode::Dirichlet, &spec)
            .unwrap();
        assert!(m.empirical.re.is_finite());
        // Zeta-mode paths must refuse.
        assert!(matches!(
            lab.joint_moment(1, 1, 0, IntegrandMode::ZetaNphi, &spec),
            Err(Error::Coverage { .. })
        ));
    }

    #[test]
    fn star_sum_second_moment_matches_the_diagonal() {
        // (1/T)∫ S*² needs no zeros at all and lands on 2 S₄ up to
        // off-diagonal leakage.
        let fx = fixture();
        let tf = TestFunction::new(Family::SmoothBumpHat, 0.4).unwrap();
        let lab = MomentLab::new(&fx.engine, None, &fx.primes, &tf, 1000.0, 20.0).unwrap();
        let spec = QuadratureSpec::stratified(20_000, 31);
        let m = lab
            .joint_moment(0, 0, 2, IntegrandMode::ZetaSstar, &spec)
            .unwrap();
        let sums = lab.relation_sums().unwrap();
        let diag2 = 2.0 * sums.s(4);
        assert!(
            (m.empirical.re - diag2).abs() <= (4.0 * m.se_re).max(0.05 * diag2),
            "moment {} vs diagonal {diag2}",
            m.empirical.re
        );
        assert_relative_eq!(m.finite_t_prediction, diag2, epsilon = 1e-14);
    }

    #[test]
    fn dirichlet_mean_value_sanity() {
        let fx = fixture();
        let tf = TestFunction::new(Family::SmoothBumpHat, 0.4).unwrap();
        let lab = lab(&fx, &tf, 100.0);
        let spec = QuadratureSpec::stratified(20_000, 9);
        let (est, exact) = lab.dirichlet_second_moment(&spec).unwrap();
        assert!(
            (est.value.re - exact).abs() <= 0.05 * exact,
            "mean value {} vs diagonal {exact}",
            est.value.re
        );
    }
}
