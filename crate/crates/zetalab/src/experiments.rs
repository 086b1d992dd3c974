//! Experiment orchestration: wire tables, zeros, and the moment lab
//! from a config; run; emit report rows and a manifest.

use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use serde_json::Value;

use zetalab_core::diag;
use zetalab_core::moments::{CdfStatistic, IntegrandMode, MomentLab};
use zetalab_core::primes::PrimeTable;
use zetalab_core::stats::PreparedSums;
use zetalab_core::testfn::{SupportMode, TestFunction};
use zetalab_core::zeta::{ZeroTable, ZetaEngine};

use crate::cache::{CacheOutcome, ZeroCache};
use crate::config::{ExperimentConfig, ExperimentKind};
use crate::report::{write_csv, write_jsonl, Row, RunManifest};
use crate::{LabError, Result};

/// Padding beyond `[T, 2T]` so every `N_φ` window is covered.
fn zero_window_pad(t_big: f64, tf: &TestFunction) -> f64 {
    let scale = t_big.ln() / std::f64::consts::TAU;
    (tf.x_cut() / scale).ceil() + 5.0
}

/// Everything assembled for one experiment run.
pub struct Workbench {
    pub engine: Arc<ZetaEngine>,
    pub primes: Arc<PrimeTable>,
    pub tf: Arc<TestFunction>,
    pub zeros: Option<Arc<ZeroTable>>,
    pub cache_events: Vec<String>,
}

impl Workbench {
    /// Build tables and (when the experiment touches zeros) the
    /// certified zero table, through the cache.
    pub fn assemble(cfg: &ExperimentConfig) -> Result<Self> {
        cfg.validate()?;
        let tf = Arc::new(TestFunction::new(cfg.family, cfg.eta)?);
        validate_support(cfg, &tf)?;
        let needs_zeros = !matches!(cfg.kind, ExperimentKind::DiagonalSelftest)
            && !(matches!(cfg.kind, ExperimentKind::JointMoments)
                && cfg.integrand == IntegrandMode::Dirichlet);

        let prime_limit = prime_limit_for(cfg, &tf);
        let primes = Arc::new(PrimeTable::build(prime_limit)?);

        let mut cache_events = Vec::new();
        let (engine, zeros) = if needs_zeros {
            let pad = zero_window_pad(cfg.t_big, &tf);
            let lo = cfg.t_big - pad;
            let hi = 2.0 * cfg.t_big + pad;
            let engine = Arc::new(ZetaEngine::new(engine_height(hi))?);
            let cache = ZeroCache::new(&cfg.cache_dir);
            let started = Instant::now();
            let (table, outcome) = cache.load_or_compute(&engine, lo, hi)?;
            cache_events.push(format!(
                "window [{lo:.3}, {hi:.3}]: {} zeros, {} in {:.1}s",
                table.len(),
                match outcome {
                    CacheOutcome::Hit => "cache hit",
                    CacheOutcome::Computed => "computed",
                    CacheOutcome::Recomputed => "cache rejected, recomputed",
                },
                started.elapsed().as_secs_f64()
            ));
            if !table.certified() {
                return Err(LabError::Invalid(format!(
                    "zero table on [{lo:.3}, {hi:.3}] failed certification"
                )));
            }
            (engine, Some(Arc::new(table)))
        } else {
            (Arc::new(ZetaEngine::new(1e4)?), None)
        };
        Ok(Workbench {
            engine,
            primes,
            tf,
            zeros,
            cache_events,
        })
    }

    pub fn lab<'a>(&'a self, cfg: &ExperimentConfig) -> Result<MomentLab<'a>> {
        Ok(MomentLab::new(
            &self.engine,
            self.zeros.as_deref(),
            &self.primes,
            &self.tf,
            cfg.t_big,
            cfg.x(),
        )?)
    }
}

/// Reject support violations before any table building.
fn validate_support(cfg: &ExperimentConfig, tf: &TestFunction) -> Result<()> {
    let required: Option<(u32, SupportMode)> = match cfg.kind {
        ExperimentKind::HughesRudnick => Some((cfg.k, SupportMode::HughesRudnick)),
        ExperimentKind::JointMoments => Some((
            cfg.k,
            match cfg.integrand {
                IntegrandMode::Dirichlet => SupportMode::HughesRudnick,
                _ => SupportMode::Unconditional,
            },
        )),
        ExperimentKind::ImaginaryMoments | ExperimentKind::WeightedClt => {
            Some((cfg.k, SupportMode::RhImaginary))
        }
        ExperimentKind::Correlation => Some((0, SupportMode::Correlation)),
        _ => None,
    };
    if let Some((k, mode)) = required {
        if !tf.validate_support(k, mode)? {
            return Err(LabError::Invalid(format!(
                "support radius eta = {} too wide for k = {k} in the {} experiment",
                cfg.eta,
                cfg.kind.name()
            )));
        }
    }
    Ok(())
}

/// Engine height with a margin for Turing flanks past the window top.
pub fn engine_height(hi: f64) -> f64 {
    (hi + 200.0).max(2.0e3)
}

fn prime_limit_for(cfg: &ExperimentConfig, tf: &TestFunction) -> u64 {
    // Prime sums need T^eta; the polynomial needs x; twisted moments
    // need the twist indices.
    let sum_limit = cfg.t_big.powf(tf.eta()).ceil() as u64;
    let twist_limit = cfg.twists.iter().copied().max().unwrap_or(0);
    sum_limit
        .max(cfg.x().ceil() as u64)
        .max(twist_limit)
        .max(1000)
}

/// Run one configured experiment, writing `records.jsonl`, `table.csv`
/// and `manifest.txt` under the output directory.
pub fn run(cfg: &ExperimentConfig) -> Result<RunManifest> {
    let started = Instant::now();
    let bench = Workbench::assemble(cfg)?;
    let rows = dispatch(cfg, &bench)?;
    std::fs::create_dir_all(&cfg.out_dir).map_err(|e| LabError::io(&cfg.out_dir, e))?;
    write_jsonl(&cfg.out_dir.join("records.jsonl"), &rows)?;
    write_csv(&cfg.out_dir.join("table.csv"), &rows)?;
    let manifest = RunManifest {
        config_echo: cfg.echo(),
        cache_events: bench.cache_events.clone(),
        wall_seconds: started.elapsed().as_secs_f64(),
        outcomes: vec![(cfg.kind.name().to_string(), true)],
    };
    manifest.write(&cfg.out_dir.join("manifest.txt"))?;
    Ok(manifest)
}

fn dispatch(cfg: &ExperimentConfig, bench: &Workbench) -> Result<Vec<Row>> {
    let spec = cfg.quadrature();
    let mut rows = Vec::new();
    match cfg.kind {
        ExperimentKind::ExplicitFormula => {
            let lab = bench.lab(cfg)?;
            let r = lab.explicit_formula_residual(1000)?;
            let mut row = Row::new("explicit_formula");
            row.t_big = cfg.t_big;
            row.x = cfg.x();
            row.eta = cfg.eta;
            row.empirical_re = r.rms;
            row.finite_t_pred = 5.0 / cfg.t_big.ln();
            row.seed = cfg.seed;
            row.extras.push(("rms".into(), Value::from(r.rms)));
            row.extras
                .push(("mean_residual".into(), Value::from(r.mean_residual)));
            row.extras
                .push(("fitted_constant".into(), Value::from(r.fitted_constant)));
            row.extras
                .push(("sup_star_diff".into(), Value::from(r.sup_star_diff)));
            row.extras
                .push(("n_points".into(), Value::from(r.n_points)));
            rows.push(row);
        }
        ExperimentKind::HughesRudnick => {
            let lab = bench.lab(cfg)?;
            let m = lab.centered_count_moment(cfg.k, &spec)?;
            let sums = lab.relation_sums()?;
            rows.push(
                Row::from_moment("hughes_rudnick", &m)
                    .with_extra("s4", Value::from(sums.s(4)))
                    .with_extra("sigma_sq", Value::from(bench.tf.sigma_sq())),
            );
        }
        ExperimentKind::JointMoments => {
            let lab = bench.lab(cfg)?;
            let m = lab.joint_moment(cfg.h, cfg.l, cfg.k, cfg.integrand, &spec)?;
            rows.push(Row::from_moment("joint_moments", &m));
        }
        ExperimentKind::ImaginaryMoments => {
            let lab = bench.lab(cfg)?;
            let m = lab.imaginary_moment(cfg.l, cfg.k, &spec)?;
            rows.push(Row::from_moment("imaginary_moments", &m));
        }
        ExperimentKind::Correlation => {
            let lab = bench.lab(cfg)?;
            let c = lab.correlation_experiment(&spec)?;
            rows.push(Row::from_correlation(&c));
        }
        ExperimentKind::Goldston => {
            let lab = bench.lab(cfg)?;
            for &n in &cfg.twists {
                let g = lab.goldston_check(n, &spec)?;
                rows.extend(Row::from_goldston(&g, cfg.t_big, cfg.eta, cfg.seed));
            }
        }
        ExperimentKind::WeightedClt => {
            let lab = bench.lab(cfg)?;
            for k in [0, cfg.k] {
                let sample = lab.weighted_sample(k, SupportMode::RhImaginary, &spec)?;
                let d = lab.weighted_cdf_distance(&sample, CdfStatistic::ImLogNorm)?;
                let dc = lab.weighted_cdf_distance(&sample, CdfStatistic::ComplexLogNorm)?;
                let mut row = Row::new("weighted_clt");
                row.k = k;
                row.t_big = cfg.t_big;
                row.x = cfg.x();
                row.eta = cfg.eta;
                row.empirical_re = d.distance;
                row.seed = cfg.seed;
                row.extras
                    .push(("im_log_distance".into(), Value::from(d.distance)));
                row.extras
                    .push(("complex_log_distance".into(), Value::from(dc.distance)));
                row.extras.push((
                    "effective_samples".into(),
                    Value::from(d.effective_samples),
                ));
                row.extras
                    .push(("normalizer".into(), Value::from(sample.normalizer)));
                let mu_k = diag::gaussian_moment(k);
                let pred = mu_k * bench.tf.sigma_sq().powf(k as f64 / 2.0);
                row.finite_t_pred = pred;
                row.asymptotic_pred = pred;
                rows.push(row);
            }
        }
        ExperimentKind::DiagonalSelftest => {
            rows.extend(diagonal_selftest_rows(cfg, &bench.primes, &bench.tf)?);
        }
    }
    Ok(rows)
}

/// The pure-combinatorics path: oracle agreement at toy scale plus the
/// matching-count identities; no zeta evaluation involved.
pub fn diagonal_selftest_rows(
    cfg: &ExperimentConfig,
    primes: &PrimeTable,
    _tf: &TestFunction,
) -> Result<Vec<Row>> {
    // Toy scale within the nested-enumeration budget.
    let t_toy = 1.0e4;
    let tf_toy = TestFunction::new(zetalab_core::testfn::Family::SmoothBumpHat, 0.55)?;
    let x = 30.0;
    let mut rows = Vec::new();
    for h in 0..=2u32 {
        for l in 0..=2u32 {
            for k in 0..=3u32 {
                if h + l + k > 5 {
                    continue;
                }
                let nested = diag::diagonal_nested(h, l, k, x, t_toy, &tf_toy, primes)?;
                let grouped = diag::diagonal_grouped(h, l, k, x, t_toy, &tf_toy, primes)?;
                let agree = (nested - grouped).abs() <= 1e-10 * (1.0 + nested.abs());
                if !agree {
                    return Err(LabError::Invalid(format!(
                        "diagonal oracles disagree at ({h},{l},{k}): {nested} vs {grouped}"
                    )));
                }
                let mut row = Row::new("diagonal_selftest");
                row.h = h;
                row.l = l;
                row.k = k;
                row.t_big = t_toy;
                row.x = x;
                row.eta = tf_toy.eta();
                row.empirical_re = nested;
                row.finite_t_pred = grouped;
                row.seed = cfg.seed;
                rows.push(row);
            }
        }
    }
    for k in (0..=4u32).step_by(2) {
        for h in 0..=2u32 {
            let fast = diag::matching_count(h, h, k);
            let slow = diag::matching_count_bruteforce(h, h, k)?;
            if fast != slow {
                return Err(LabError::Invalid(format!(
                    "matching counts disagree at ({h},{h},{k}): {fast} vs {slow}"
                )));
            }
        }
    }
    for k in (0..=12u32).step_by(2) {
        let lhs = diag::matching_count(0, 0, k) as f64 * 0.5f64.powi(k as i32 / 2);
        if (lhs - diag::gaussian_moment(k)).abs() > 1e-9 {
            return Err(LabError::Invalid(format!(
                "pairing identity fails at k = {k}"
            )));
        }
    }
    Ok(rows)
}

/// Prepared-sum accessor used by acceptance criteria that need the
/// prime-side statistics without a full lab.
pub fn prepared_sums(
    t_big: f64,
    tf: &TestFunction,
    primes: &PrimeTable,
) -> Result<PreparedSums> {
    Ok(PreparedSums::new(t_big, tf, primes)?)
}

/// Convenience wrapper for the CLI `zeros` subcommand.
pub fn compute_zero_window(
    cache_dir: &Path,
    t_low: f64,
    t_high: f64,
) -> Result<(ZeroTable, Vec<String>)> {
    let engine = ZetaEngine::new(engine_height(t_high))?;
    let cache = ZeroCache::new(cache_dir);
    let started = Instant::now();
    let (table, outcome) = cache.load_or_compute(&engine, t_low, t_high)?;
    let events = vec![format!(
        "window [{t_low:.3}, {t_high:.3}]: {} zeros, certified={}, {} in {:.1}s",
        table.len(),
        table.certified(),
        match outcome {
            CacheOutcome::Hit => "cache hit",
            CacheOutcome::Computed => "computed",
            CacheOutcome::Recomputed => "cache rejected, recomputed",
        },
        started.elapsed().as_secs_f64()
    )];
    Ok((table, events))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ExperimentConfig;

    fn scratch(tag: &str) -> std::path::PathBuf {
        let d = std::env::temp_dir().join(format!(
            "zetalab-exp-{tag}-{}",
            std::process::id()
        ));
        let _ = std::fs::remove_dir_all(&d);
        d
    }

    #[test]
    fn diagonal_selftest_runs_without_zeros() {
        let dir = scratch("diag");
        let cfg = ExperimentConfig {
            kind: ExperimentKind::DiagonalSelftest,
            out_dir: dir.join("out"),
            cache_dir: dir.join("cache"),
            ..ExperimentConfig::default()
        };
        let manifest = run(&cfg).unwrap();
        assert!(manifest.outcomes.iter().all(|(_, ok)| *ok));
        assert!(cfg.out_dir.join("records.jsonl").exists());
        assert!(cfg.out_dir.join("table.csv").exists());
        assert!(cfg.out_dir.join("manifest.txt").exists());
        let _ = std::fs::remove_dir_all(&dir);
    }

    #[test]
    fn dirichlet_joint_moment_runs_without_zeros() {
        let dir = scratch("dirichlet");
        let cfg = ExperimentConfig {
            kind: ExperimentKind::JointMoments,
            integrand: IntegrandMode::Dirichlet,
            t_big: 1e4,
            h: 1,
            l: 1,
            k: 0,
            points: 2000,
            out_dir: dir.join("out"),
            cache_dir: dir.join("cache"),
            ..ExperimentConfig::default()
        };
        run(&cfg).unwrap();
        let rows = crate::report::read_jsonl(&cfg.out_dir.join("records.jsonl")).unwrap();
        assert_eq!(rows.len(), 1);
        assert!(rows[0].empirical_re.is_finite());
        let _ = std::fs::remove_dir_all(&dir);
    }

    #[test]
    fn every_zero_backed_kind_dispatches_end_to_end() {
        let dir = scratch("kinds");
        let base = ExperimentConfig {
            t_big: 1e3,
            eta: 0.4,
            points: 2000,
            seed: 11,
            cache_dir: dir.join("cache"),
            ..ExperimentConfig::default()
        };
        for (kind, expected_rows) in [
            (ExperimentKind::ExplicitFormula, 1usize),
            (ExperimentKind::HughesRudnick, 1),
            (ExperimentKind::ImaginaryMoments, 1),
            (ExperimentKind::Goldston, 6),
            (ExperimentKind::WeightedClt, 2),
        ] {
            let mut cfg = base.clone();
            cfg.kind = kind;
            cfg.l = 2;
            cfg.k = 2;
            if kind == ExperimentKind::WeightedClt {
                // Unequal weights shrink the effective sample count.
                cfg.points = 5000;
            }
            cfg.out_dir = dir.join(kind.name());
            run(&cfg).unwrap_or_else(|e| panic!("{} failed: {e}", kind.name()));
            let rows = crate::report::read_jsonl(&cfg.out_dir.join("records.jsonl")).unwrap();
            assert_eq!(rows.len(), expected_rows, "{}", kind.name());
            assert!(rows.iter().all(|r| r.empirical_re.is_finite()));
        }
        let _ = std::fs::remove_dir_all(&dir);
    }

    #[test]
    fn identical_configs_produce_identical_reports() {
        let dir = scratch("determinism");
        let cfg = ExperimentConfig {
            kind: ExperimentKind::Correlation,
            t_big: 1e3,
            eta: 0.8,
            points: 1500,
            seed: 7,
            out_dir: dir.join("out1"),
            cache_dir: dir.join("cache"),
            ..ExperimentConfig::default()
        };
        run(&cfg).unwrap();
        let mut cfg2 = cfg.clone();
        cfg2.out_dir = dir.join("out2");
        run(&cfg2).unwrap();
        let a = std::fs::read(cfg.out_dir.join("records.jsonl")).unwrap();
        let b = std::fs::read(cfg2.out_dir.join("records.jsonl")).unwrap();
        assert_eq!(a, b);
        let a = std::fs::read(cfg.out_dir.join("table.csv")).unwrap();
        let b = std::fs::read(cfg2.out_dir.join("table.csv")).unwrap();
        assert_eq!(a, b);
        let _ = std::fs::remove_dir_all(&dir);
    }
}
