//! Report emission: a flat CSV table, line-delimited JSON records, and
//! the run manifest.
//!
//! The CSV header is fixed:
//!
//! ```text
//! experiment, h, l, k, T, x, eta, empirical_re, empirical_im, stderr, finite_T_pred, asymptotic_pred
//! ```
//!
//! JSON records carry the same columns plus `seed`, `version`, and any
//! experiment-specific extras; keys are sorted so reruns are
//! byte-identical.

use std::fs;
use std::io::Write as _;
use std::path::Path;

use serde_json::{Map, Value};

use zetalab_core::moments::{CorrelationReport, GoldstonCheck, MomentReport};

use crate::{LabError, Result, VERSION};

/// One report row: the flat-table columns plus structured extras.
#[derive(Debug, Clone)]
pub struct Row {
    pub experiment: String,
    pub h: u32,
    pub l: u32,
    pub k: u32,
    pub t_big: f64,
    pub x: f64,
    pub eta: f64,
    pub empirical_re: f64,
    pub empirical_im: f64,
    pub stderr: f64,
    pub finite_t_pred: f64,
    pub asymptotic_pred: f64,
    pub seed: u64,
    pub extras: Vec<(String, Value)>,
}

impl Row {
    pub fn new(experiment: impl Into<String>) -> Self {
        Row {
            experiment: experiment.into(),
            h: 0,
            l: 0,
            k: 0,
            t_big: 0.0,
            x: 0.0,
            eta: 0.0,
            empirical_re: 0.0,
            empirical_im: 0.0,
            stderr: 0.0,
            finite_t_pred: 0.0,
            asymptotic_pred: 0.0,
            seed: 0,
            extras: Vec::new(),
        }
    }

    pub fn with_extra(mut self, key: &str, value: Value) -> Self {
        self.extras.push((key.to_string(), value));
        self
    }

    pub fn from_moment(experiment: &str, m: &MomentReport) -> Self {
        let mut row = Row::new(experiment);
        row.h = m.h;
        row.l = m.l;
        row.k = m.k;
        row.t_big = m.t_big;
        row.x = m.x;
        row.eta = m.eta;
        row.empirical_re = m.empirical.re;
        row.empirical_im = m.empirical.im;
        row.stderr = m.stderr();
        row.finite_t_pred = m.finite_t_prediction;
        row.asymptotic_pred = m.asymptotic_prediction;
        row.seed = m.seed;
        row.extras.push(("mode".into(), Value::from(m.mode)));
        row.extras
            .push(("n_samples".into(), Value::from(m.n_samples)));
        row.extras.push(("se_re".into(), Value::from(m.se_re)));
        row.extras.push(("se_im".into(), Value::from(m.se_im)));
        row
    }

    pub fn from_correlation(c: &CorrelationReport) -> Self {
        let mut row = Row::new("correlation");
        row.h = 1;
        row.l = 0;
        row.k = 1;
        row.t_big = c.t_big;
        row.x = c.x;
        row.eta = c.eta;
        row.empirical_re = c.empirical.re;
        row.empirical_im = c.empirical.im;
        row.stderr = (c.se_re * c.se_re + c.se_im * c.se_im).sqrt();
        row.finite_t_pred = c.finite_t_prediction;
        row.asymptotic_pred = c.asymptotic_prediction;
        row.seed = c.seed;
        for (k, v) in [
            ("corr_coeff_empirical", c.corr_coeff_empirical),
            ("corr_coeff_predicted", c.corr_coeff_predicted),
            ("log_second_moment", c.log_second_moment),
            ("nphi_second_moment", c.nphi_second_moment),
            ("se_re", c.se_re),
            ("se_im", c.se_im),
        ] {
            row.extras.push((k.into(), Value::from(v)));
        }
        row
    }

    pub fn from_goldston(g: &GoldstonCheck, t_big: f64, eta: f64, seed: u64) -> Vec<Self> {
        let mut plus = Row::new("goldston_plus");
        plus.h = g.n as u32;
        plus.t_big = t_big;
        plus.eta = eta;
        plus.empirical_re = g.plus.re;
        plus.empirical_im = g.plus.im;
        plus.stderr = (g.plus_se.0 * g.plus_se.0 + g.plus_se.1 * g.plus_se.1).sqrt();
        plus.finite_t_pred = g.prediction;
        plus.asymptotic_pred = g.prediction;
        plus.seed = seed;
        let mut minus = Row::new("goldston_minus");
        minus.h = g.n as u32;
        minus.t_big = t_big;
        minus.eta = eta;
        minus.empirical_re = g.minus.re;
        minus.empirical_im = g.minus.im;
        minus.stderr = (g.minus_se.0 * g.minus_se.0 + g.minus_se.1 * g.minus_se.1).sqrt();
        minus.finite_t_pred = 0.0;
        minus.asymptotic_pred = 0.0;
        minus.seed = seed;
        vec![plus, minus]
    }

    fn csv_line(&self) -> String {
        format!(
            "{}, {}, {}, {}, {}, {}, {}, {:.10e}, {:.10e}, {:.10e}, {:.10e}, {:.10e}",
            self.experiment,
            self.h,
            self.l,
            self.k,
            fmt_num(self.t_big),
            fmt_num(self.x),
            fmt_num(self.eta),
            self.empirical_re,
            self.empirical_im,
            self.stderr,
            self.finite_t_pred,
            self.asymptotic_pred
        )
    }

    fn json_line(&self) -> String {
        let mut map = Map::new();
        map.insert("experiment".into(), Value::from(self.experiment.clone()));
        map.insert("h".into(), Value::from(self.h));
        map.insert("l".into(), Value::from(self.l));
        map.insert("k".into(), Value::from(self.k));
        map.insert("T".into(), Value::from(self.t_big));
        map.insert("x".into(), Value::from(self.x));
        map.insert("eta".into(), Value::from(self.eta));
        map.insert("empirical_re".into(), Value::from(self.empirical_re));
        map.insert("empirical_im".into(), Value::from(self.empirical_im));
        map.insert("stderr".into(), Value::from(self.stderr));
        map.insert("finite_T_pred".into(), Value::from(self.finite_t_pred));
        map.insert(
            "asymptotic_pred".into(),
            Value::from(self.asymptotic_pred),
        );
        map.insert("seed".into(), Value::from(self.seed));
        map.insert("version".into(), Value::from(VERSION));
        for (k, v) in &self.extras {
            map.insert(k.clone(), v.clone());
        }
        // serde_json::Map with preserve_order off sorts keys; rely on
        // BTreeMap-backed ordering for byte-stable output.
        Value::Object(map).to_string()
    }
}

fn fmt_num(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

/// The CSV header line, exactly as emitted.
pub const CSV_HEADER: &str =
    "experiment, h, l, k, T, x, eta, empirical_re, empirical_im, stderr, finite_T_pred, asymptotic_pred";

/// Write the flat CSV table.
pub fn write_csv(path: &Path, rows: &[Row]) -> Result<()> {
    let mut text = String::from(CSV_HEADER);
    text.push('\n');
    for row in rows {
        text.push_str(&row.csv_line());
        text.push('\n');
    }
    write_atomic(path, text.as_bytes())
}

/// Write the line-delimited JSON records.
pub fn write_jsonl(path: &Path, rows: &[Row]) -> Result<()> {
    let mut text = String::new();
    for row in rows {
        text.push_str(&row.json_line());
        text.push('\n');
    }
    write_atomic(path, text.as_bytes())
}

/// Read rows back from a JSONL file (for the `report` subcommand).
pub fn read_jsonl(path: &Path) -> Result<Vec<Row>> {
    let text = fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let v: Value = serde_json::from_str(line).map_err(|e| LabError::ConfigParse {
            line: idx + 1,
            message: format!("bad JSON record: {e}"),
        })?;
        let get_f = |k: &str| v.get(k).and_then(Value::as_f64).unwrap_or(0.0);
        let get_u = |k: &str| v.get(k).and_then(Value::as_u64).unwrap_or(0);
        rows.push(Row {
            experiment: v
                .get("experiment")
                .and_then(Value::as_str)
                .unwrap_or("unknown")
                .to_string(),
            h: get_u("h") as u32,
            l: get_u("l") as u32,
            k: get_u("k") as u32,
            t_big: get_f("T"),
            x: get_f("x"),
            eta: get_f("eta"),
            empirical_re: get_f("empirical_re"),
            empirical_im: get_f("empirical_im"),
            stderr: get_f("stderr"),
            finite_t_pred: get_f("finite_T_pred"),
            asymptotic_pred: get_f("asymptotic_pred"),
            seed: get_u("seed"),
            extras: Vec::new(),
        });
    }
    Ok(rows)
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(|e| LabError::io(parent, e))?;
        }
    }
    let tmp = path.with_extension(format!("tmp.{}", std::process::id()));
    {
        let mut f = fs::File::create(&tmp).map_err(|e| LabError::io(&tmp, e))?;
        f.write_all(bytes).map_err(|e| LabError::io(&tmp, e))?;
        f.flush().map_err(|e| LabError::io(&tmp, e))?;
    }
    fs::rename(&tmp, path).map_err(|e| LabError::io(path, e))?;
    Ok(())
}

/// Run metadata: config echo, cache provenance, timing, and outcomes.
#[derive(Debug, Clone, Default)]
pub struct RunManifest {
    pub config_echo: Vec<(String, String)>,
    pub cache_events: Vec<String>,
    pub wall_seconds: f64,
    pub outcomes: Vec<(String, bool)>,
}

impl RunManifest {
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("version = {VERSION}\n"));
        out.push_str(&format!("wall_seconds = {:.3}\n", self.wall_seconds));
        out.push_str("[config]\n");
        for (k, v) in &self.config_echo {
            out.push_str(&format!("{k} = {v}\n"));
        }
        if !self.cache_events.is_empty() {
            out.push_str("[zero_cache]\n");
            for e in &self.cache_events {
                out.push_str(e);
                out.push('\n');
            }
        }
        if !self.outcomes.is_empty() {
            out.push_str("[outcomes]\n");
            for (name, pass) in &self.outcomes {
                out.push_str(&format!(
                    "{name} = {}\n",
                    if *pass { "pass" } else { "FAIL" }
                ));
            }
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_atomic(path, self.render().as_bytes())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_header_is_pinned() {
        assert_eq!(
            CSV_HEADER,
            "experiment, h, l, k, T, x, eta, empirical_re, empirical_im, stderr, finite_T_pred, asymptotic_pred"
        );
    }

    #[test]
    fn jsonl_roundtrip_and_determinism() {
        let dir = std::env::temp_dir().join(format!("zetalab-report-{}", std::process::id()));
        let _ = fs::remove_dir_all(&dir);
        fs::create_dir_all(&dir).unwrap();
        let mut row = Row::new("correlation");
        row.t_big = 1e5;
        row.x = 1.26;
        row.eta = 0.8;
        row.empirical_re = -0.123456789;
        row.stderr = 4.2e-4;
        row.seed = 42;
        let rows = vec![row.clone().with_extra("note", Value::from("x")), row];
        let p1 = dir.join("a.jsonl");
        let p2 = dir.join("b.jsonl");
        write_jsonl(&p1, &rows).unwrap();
        write_jsonl(&p2, &rows).unwrap();
        assert_eq!(fs::read(&p1).unwrap(), fs::read(&p2).unwrap());
        let back = read_jsonl(&p1).unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back[0].experiment, "correlation");
        assert!((back[0].empirical_re + 0.123456789).abs() < 1e-15);
        let csv = dir.join("t.csv");
        write_csv(&csv, &rows).unwrap();
        let text = fs::read_to_string(&csv).unwrap();
        assert!(text.starts_with(CSV_HEADER));
        assert_eq!(text.lines().count(), 3);
        let _ = fs::remove_dir_all(&dir);
    }
}
