//! Declarative experiment configs.
//!
//! Flat key-value text with `[section]` headers, parsed strictly:
//! unknown sections or keys are errors, as are missing required keys.
//! Example:
//!
//! ```text
//! [experiment]
//! kind = correlation
//! T = 1e5
//! x_exponent = 0.02
//! seed = 42
//!
//! [test_function]
//! family = smooth_bump_hat
//! eta = 0.8
//!
//! [quadrature]
//! mode = stratified_random
//! points = 200000
//!
//! [output]
//! dir = out
//! cache_dir = cache
//! ```

use std::collections::BTreeMap;
use std::path::PathBuf;

use zetalab_core::moments::IntegrandMode;
use zetalab_core::quad::{QuadratureMode, QuadratureSpec};
use zetalab_core::testfn::Family;

use crate::{LabError, Result};

/// Which experiment to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    ExplicitFormula,
    HughesRudnick,
    JointMoments,
    ImaginaryMoments,
    Correlation,
    Goldston,
    WeightedClt,
    DiagonalSelftest,
}

impl ExperimentKind {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "explicit_formula" => Self::ExplicitFormula,
            "hughes_rudnick" => Self::HughesRudnick,
            "joint_moments" => Self::JointMoments,
            "imaginary_moments" => Self::ImaginaryMoments,
            "correlation" => Self::Correlation,
            "goldston" => Self::Goldston,
            "weighted_clt" => Self::WeightedClt,
            "diagonal_selftest" => Self::DiagonalSelftest,
            other => return Err(LabError::Invalid(format!("unknown experiment '{other}'"))),
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::ExplicitFormula => "explicit_formula",
            Self::HughesRudnick => "hughes_rudnick",
            Self::JointMoments => "joint_moments",
            Self::ImaginaryMoments => "imaginary_moments",
            Self::Correlation => "correlation",
            Self::Goldston => "goldston",
            Self::WeightedClt => "weighted_clt",
            Self::DiagonalSelftest => "diagonal_selftest",
        }
    }
}

/// A fully resolved experiment description.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub t_big: f64,
    /// `x = T^x_exponent`.
    pub x_exponent: f64,
    pub h: u32,
    pub l: u32,
    pub k: u32,
    pub integrand: IntegrandMode,
    pub family: Family,
    pub eta: f64,
    pub quad_mode: QuadratureMode,
    pub points: usize,
    pub samples_per_gap: f64,
    pub seed: u64,
    /// Twist indices for the twisted-first-moment experiment.
    pub twists: Vec<u64>,
    pub out_dir: PathBuf,
    pub cache_dir: PathBuf,
    pub threads: Option<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            kind: ExperimentKind::DiagonalSelftest,
            t_big: 1e5,
            x_exponent: 0.02,
            h: 1,
            l: 1,
            k: 2,
            integrand: IntegrandMode::Dirichlet,
            family: Family::SmoothBumpHat,
            eta: 0.4,
            quad_mode: QuadratureMode::StratifiedRandom,
            points: 200_000,
            samples_per_gap: 8.0,
            seed: 1,
            twists: vec![2, 3, 4],
            out_dir: PathBuf::from("out"),
            cache_dir: PathBuf::from("cache"),
            threads: None,
        }
    }
}

impl ExperimentConfig {
    /// `x = T^{x_exponent}`.
    pub fn x(&self) -> f64 {
        self.t_big.powf(self.x_exponent)
    }

    pub fn quadrature(&self) -> QuadratureSpec {
        QuadratureSpec {
            mode: self.quad_mode,
            points: self.points,
            samples_per_gap: self.samples_per_gap,
            seed: self.seed,
        }
    }

    /// Structural validation (support conditions are checked by the
    /// experiment itself, where the statistic is known).
    pub fn validate(&self) -> Result<()> {
        if self.t_big < 1e3 {
            return Err(LabError::Invalid(format!(
                "T = {} below the 10^3 floor",
                self.t_big
            )));
        }
        if !(self.x_exponent > 0.0 && self.x_exponent <= 0.1) {
            return Err(LabError::Invalid(format!(
                "x_exponent = {} outside (0, 0.1]",
                self.x_exponent
            )));
        }
        if !(self.eta > 0.0 && self.eta <= 2.0) {
            return Err(LabError::Invalid(format!(
                "eta = {} outside (0, 2]",
                self.eta
            )));
        }
        Ok(())
    }

    /// Parse the sectioned key-value format, strictly.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        let mut section = String::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| LabError::ConfigParse {
                line: idx + 1,
                message,
            };
            if let Some(name) = line.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| err("unterminated section header".into()))?;
                match name {
                    "experiment" | "test_function" | "quadrature" | "output" => {
                        section = name.to_string();
                    }
                    other => return Err(err(format!("unknown section '[{other}]'"))),
                }
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected 'key = value', got '{line}'")))?;
            let key = key.trim();
            let value = value.trim();
            let parse_f64 = |v: &str| {
                v.parse::<f64>()
                    .map_err(|_| err(format!("bad number '{v}'")))
            };
            match (section.as_str(), key) {
                ("experiment", "kind") => cfg.kind = ExperimentKind::parse(value)?,
                ("experiment", "T") => cfg.t_big = parse_f64(value)?,
                ("experiment", "x_exponent") => cfg.x_exponent = parse_f64(value)?,
                ("experiment", "h") => {
                    cfg.h = value.parse().map_err(|_| err("bad integer".into()))?
                }
                ("experiment", "l") => {
                    cfg.l = value.parse().map_err(|_| err("bad integer".into()))?
                }
                ("experiment", "k") => {
                    cfg.k = value.parse().map_err(|_| err("bad integer".into()))?
                }
                ("experiment", "seed") => {
                    cfg.seed = value.parse().map_err(|_| err("bad integer".into()))?
                }
                ("experiment", "integrand") => {
                    cfg.integrand = match value {
                        "zeta_nphi" => IntegrandMode::ZetaNphi,
                        "zeta_sstar" => IntegrandMode::ZetaSstar,
                        "dirichlet" => IntegrandMode::Dirichlet,
                        other => return Err(err(format!("unknown integrand '{other}'"))),
                    }
                }
                ("experiment", "twists") => {
                    cfg.twists = value
                        .split(',')
                        .map(|v| v.trim().parse::<u64>())
                        .collect::<std::result::Result<_, _>>()
                        .map_err(|_| err("bad twist list".into()))?;
                }
                ("test_function", "family") => cfg.family = Family::parse(value)?,
                ("test_function", "eta") => cfg.eta = parse_f64(value)?,
                ("quadrature", "mode") => {
                    cfg.quad_mode = match value {
                        "full_grid" => QuadratureMode::FullGrid,
                        "stratified_random" => QuadratureMode::StratifiedRandom,
                        other => return Err(err(format!("unknown quadrature mode '{other}'"))),
                    }
                }
                ("quadrature", "points") => {
                    cfg.points = value.parse().map_err(|_| err("bad integer".into()))?
                }
                ("quadrature", "samples_per_gap") => cfg.samples_per_gap = parse_f64(value)?,
                ("output", "dir") => cfg.out_dir = PathBuf::from(value),
                ("output", "cache_dir") => cfg.cache_dir = PathBuf::from(value),
                ("", k) => return Err(err(format!("key '{k}' before any section"))),
                (s, k) => return Err(err(format!("unknown key '{k}' in section '[{s}]'"))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Deterministic echo of every field, for the run manifest.
    pub fn echo(&self) -> Vec<(String, String)> {
        let mut m = BTreeMap::new();
        m.insert("experiment.kind", self.kind.name().to_string());
        m.insert("experiment.T", format!("{}", self.t_big));
        m.insert("experiment.x_exponent", format!("{}", self.x_exponent));
        m.insert("experiment.h", self.h.to_string());
        m.insert("experiment.l", self.l.to_string());
        m.insert("experiment.k", self.k.to_string());
        m.insert("experiment.integrand", self.integrand.label().to_string());
        m.insert(
            "experiment.twists",
            self.twists
                .iter()
                .map(|t| t.to_string())
                .collect::<Vec<_>>()
                .join(","),
        );
        m.insert("experiment.seed", self.seed.to_string());
        m.insert("test_function.family", self.family.name().to_string());
        m.insert("test_function.eta", format!("{}", self.eta));
        m.insert(
            "quadrature.mode",
            match self.quad_mode {
                QuadratureMode::FullGrid => "full_grid".to_string(),
                QuadratureMode::StratifiedRandom => "stratified_random".to_string(),
            },
        );
        m.insert("quadrature.points", self.points.to_string());
        m.insert(
            "quadrature.samples_per_gap",
            format!("{}", self.samples_per_gap),
        );
        m.insert("output.dir", self.out_dir.display().to_string());
        m.insert("output.cache_dir", self.cache_dir.display().to_string());
        m.into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect()
    }
}
