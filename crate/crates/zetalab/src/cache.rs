//! Persistent zero-table cache.
//!
//! One text file per window, named by the rounded endpoints:
//!
//! ```text
//! # zeros <t_low> <t_high> <count> <certified>
//! 14.134725142
//! 21.022039639
//! ...
//! ```
//!
//! Loads are validated (header shape, count, ordering, range); any
//! mismatch discards the file and recomputes. Partial overlap never
//! stitches windows — certification is per window. Writes go through a
//! temp file and an atomic rename. The absolute count below the window
//! start is not stored; it is re-derived at load time from a short
//! anchored scan, and a five-gap spot check re-finds the first zeros
//! so a cache hit can never silently diverge from recomputation.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use zetalab_core::zeta::{absolute_count_below, find_zeros, mean_gap, ZeroTable, ZetaEngine};

use crate::{LabError, Result};

/// Directory-backed cache of certified zero tables.
pub struct ZeroCache {
    dir: PathBuf,
}

/// Snap ordinates to the 9-decimal storage grid so a freshly computed
/// table is bit-identical to its own cache round trip.
fn canonicalize(table: ZeroTable) -> Result<ZeroTable> {
    let gammas = table
        .gammas()
        .iter()
        .map(|g| (g * 1e9).round() / 1e9)
        .collect();
    Ok(ZeroTable::from_parts(
        table.t_low(),
        table.t_high(),
        gammas,
        table.certified(),
        table.n_start(),
    )?)
}

/// Provenance of one table acquisition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CacheOutcome {
    Hit,
    Computed,
    /// A file existed but failed validation and was recomputed.
    Recomputed,
}

impl ZeroCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path_for(&self, t_low: f64, t_high: f64) -> PathBuf {
        self.dir
            .join(format!("zeros_{t_low:.3}_{t_high:.3}.txt"))
    }

    /// Load a certified table covering exactly `[t_low, t_high]`, or
    /// compute and persist it.
    pub fn load_or_compute(
        &self,
        engine: &ZetaEngine,
        t_low: f64,
        t_high: f64,
    ) -> Result<(ZeroTable, CacheOutcome)> {
        let path = self.path_for(t_low, t_high);
        let mut outcome = CacheOutcome::Computed;
        if path.exists() {
            match self.try_load(engine, &path, t_low, t_high) {
                Ok(table) => return Ok((table, CacheOutcome::Hit)),
                Err(_) => outcome = CacheOutcome::Recomputed,
            }
        }
        let table = canonicalize(find_zeros(engine, t_low, t_high)?)?;
        if table.certified() {
            self.save(&table)?;
        }
        Ok((table, outcome))
    }

    fn try_load(
        &self,
        engine: &ZetaEngine,
        path: &Path,
        t_low: f64,
        t_high: f64,
    ) -> Result<ZeroTable> {
        let text = fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| LabError::Invalid("empty cache file".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 6 || fields[0] != "#" || fields[1] != "zeros" {
            return Err(LabError::Invalid(format!("bad cache header '{header}'")));
        }
        let h_low: f64 = fields[2]
            .parse()
            .map_err(|_| LabError::Invalid("bad t_low".into()))?;
        let h_high: f64 = fields[3]
            .parse()
            .map_err(|_| LabError::Invalid("bad t_high".into()))?;
        let count: usize = fields[4]
            .parse()
            .map_err(|_| LabError::Invalid("bad count".into()))?;
        let certified: bool = fields[5]
            .parse()
            .map_err(|_| LabError::Invalid("bad certified flag".into()))?;
        if (h_low - t_low).abs() > 1e-6 || (h_high - t_high).abs() > 1e-6 || !certified {
            return Err(LabError::Invalid("cache window mismatch".into()));
        }
        let mut gammas = Vec::with_capacity(count);
        for line in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            gammas.push(
                line.parse::<f64>()
                    .map_err(|_| LabError::Invalid(format!("bad ordinate '{line}'")))?,
            );
        }
        if gammas.len() != count {
            return Err(LabError::Invalid(format!(
                "cache count mismatch: header {count}, found {}",
                gammas.len()
            )));
        }
        let n_start = absolute_count_below(engine, t_low)?;
        let table = ZeroTable::from_parts(t_low, t_high, gammas, true, n_start)?;
        self.spot_check(engine, &table)?;
        Ok(table)
    }

    /// Re-find the zeros on the first five mean gaps of the window and
    /// compare against the cached ordinates.
    fn spot_check(&self, engine: &ZetaEngine, table: &ZeroTable) -> Result<()> {
        let lo = table.t_low();
        let hi = (lo + 5.0 * mean_gap(lo.max(15.0))).min(table.t_high());
        let fresh = find_zeros(engine, lo, hi)?;
        let cached = table.zeros_in(lo, hi);
        // The fresh window may see one fewer/more zero at its boundary.
        if fresh.len() != cached.len() {
            return Err(LabError::Invalid(format!(
                "spot check count mismatch: {} cached vs {} fresh",
                cached.len(),
                fresh.len()
            )));
        }
        for (c, f) in cached.iter().zip(fresh.gammas()) {
            if (c - f).abs() > 1e-6 {
                return Err(LabError::Invalid(format!(
                    "spot check ordinate mismatch: {c} vs {f}"
                )));
            }
        }
        Ok(())
    }

    /// Persist a certified table (atomic write-then-rename).
    pub fn save(&self, table: &ZeroTable) -> Result<()> {
        fs::create_dir_all(&self.dir).map_err(|e| LabError::io(&self.dir, e))?;
        let path = self.path_for(table.t_low(), table.t_high());
        let tmp = path.with_extension(format!("tmp.{}", std::process::id()));
        {
            let mut f = fs::File::create(&tmp).map_err(|e| LabError::io(&tmp, e))?;
            writeln!(
                f,
                "# zeros {:.6} {:.6} {} {}",
                table.t_low(),
                table.t_high(),
                table.len(),
                table.certified()
            )
            .map_err(|e| LabError::io(&tmp, e))?;
            for g in table.gammas() {
                writeln!(f, "{g:.9}").map_err(|e| LabError::io(&tmp, e))?;
            }
            f.flush().map_err(|e| LabError::io(&tmp, e))?;
        }
        fs::rename(&tmp, &path).map_err(|e| LabError::io(&path, e))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tmpdir(tag: &str) -> PathBuf {
        let d = std::env::temp_dir().join(format!("zetalab-cache-test-{tag}-{}", std::process::id()));
        let _ = fs::remove_dir_all(&d);
        fs::create_dir_all(&d).unwrap();
        d
    }

    #[test]
    fn roundtrip_and_hit() {
        let dir = tmpdir("roundtrip");
        let cache = ZeroCache::new(&dir);
        let engine = ZetaEngine::new(2000.0).unwrap();
        let (t1, o1) = cache.load_or_compute(&engine, 10.0, 60.0).unwrap();
        assert_eq!(o1, CacheOutcome::Computed);
        let (t2, o2) = cache.load_or_compute(&engine, 10.0, 60.0).unwrap();
        assert_eq!(o2, CacheOutcome::Hit);
        assert_eq!(t1.len(), t2.len());
        assert_eq!(t1.n_start(), t2.n_start());
        for (a, b) in t1.gammas().iter().zip(t2.gammas()) {
            // Stored at 9 decimals.
            assert!((a - b).abs() < 1e-8);
        }
        let _ = fs::remove_dir_all(&dir);
    }

    #[test]
    fn corrupted_cache_is_recomputed() {
        let dir = tmpdir("corrupt");
        let cache = ZeroCache::new(&dir);
        let engine = ZetaEngine::new(2000.0).unwrap();
        let (t1, _) = cache.load_or_compute(&engine, 10.0, 60.0).unwrap();
        // Damage the count field.
        let path = dir.join("zeros_10.000_60.000.txt");
        let text = fs::read_to_string(&path).unwrap();
        let bad = text.replacen(&format!(" {} ", t1.len()), " 999 ", 1);
        fs::write(&path, bad).unwrap();
        let (t2, o2) = cache.load_or_compute(&engine, 10.0, 60.0).unwrap();
        assert_eq!(o2, CacheOutcome::Recomputed);
        assert_eq!(t2.len(), t1.len());
        let _ = fs::remove_dir_all(&dir);
    }

    #[test]
    fn tampered_ordinates_fail_the_spot_check() {
        let dir = tmpdir("tamper");
        let cache = ZeroCache::new(&dir);
        let engine = ZetaEngine::new(2000.0).unwrap();
        let (t1, _) = cache.load_or_compute(&engine, 10.0, 60.0).unwrap();
        let path = dir.join("zeros_10.000_60.000.txt");
        let text = fs::read_to_string(&path).unwrap();
        // Nudge the first ordinate by 1e-3: count and ordering stay
        // valid, so only the spot check can notice.
        let first = format!("{:.9}", t1.gammas()[0]);
        let moved = format!("{:.9}", t1.gammas()[0] + 1e-3);
        fs::write(&path, text.replacen(&first, &moved, 1)).unwrap();
        let (_, o2) = cache.load_or_compute(&engine, 10.0, 60.0).unwrap();
        assert_eq!(o2, CacheOutcome::Recomputed);
        let _ = fs::remove_dir_all(&dir);
    }
}
