//! Zero location and Turing-method completeness certification.
//!
//! Sign changes of `Z` on a grid of eight points per mean gap bracket
//! the zeros; each bracket is refined to width `1e-9`. Completeness is
//! certified two ways depending on height:
//!
//! * below `t ≈ 280` the bound `|S(t)| < 1` pins `N(t)` to two
//!   candidates and the sign of `Z` picks the right parity;
//! * above `t = 168π` the integral `∫ S(t) dt` obeys Turing's bound
//!   (Lehman's constants `2.30 + 0.128 log(t/2π)`), which both fixes
//!   the absolute count at the window edge and exposes any missed
//!   zeros, since a miss depresses the running `S̃` by 2 from there on.
//!
//! Failed checks trigger up to three rounds of grid refinement (factor
//! four each) around the suspected miss before the table is returned
//! with `certified = false`.

use alloc::format;
use alloc::vec::Vec;

use super::{mean_gap, ZetaEngine};
use crate::math::{par_map_indexed, FloatExt};
use crate::{Error, Result};

const TAU: f64 = core::f64::consts::TAU;
const PI: f64 = core::f64::consts::PI;

/// Heights below this have |S(t)| < 1 (first failure is near t = 282),
/// so parity anchoring applies.
const PARITY_MAX: f64 = 270.0;
/// Lehman's form of Turing's bound is valid from 168π ≈ 527.8 up.
const TURING_MIN: f64 = 528.0;
/// Numerical slack added to the Turing bound.
const TURING_SLACK: f64 = 0.05;
/// Bisection/regula-falsi bracket tolerance.
const ZERO_TOL: f64 = 1e-9;
/// Grid density: sample points per mean gap.
const SAMPLES_PER_GAP: f64 = 8.0;
/// Maximum refinement rounds after a failed certification.
const MAX_REFINE_ROUNDS: usize = 3;

/// Ordered zero ordinates on a window, with a completeness certificate
/// and the absolute count below the window start.
#[derive(Debug, Clone)]
pub struct ZeroTable {
    t_low: f64,
    t_high: f64,
    /// Zeros with `t_low < γ <= t_high`, ascending.
    gammas: Vec<f64>,
    certified: bool,
    /// `N(t_low)`: number of zeros with ordinate `<= t_low`.
    n_start: u64,
}

impl ZeroTable {
    /// Reassemble a table from stored parts (cache loading).
    pub fn from_parts(
        t_low: f64,
        t_high: f64,
        gammas: Vec<f64>,
        certified: bool,
        n_start: u64,
    ) -> Result<Self> {
        if t_low >= t_high || !t_low.is_finite() {
            return Err(Error::Config(format!(
                "zero table bounds [{t_low}, {t_high}] are not increasing"
            )));
        }
        if !gammas.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Config("zero ordinates are not ascending".into()));
        }
        if gammas
            .iter()
            .any(|&g| g <= t_low || g > t_high || !g.is_finite())
        {
            return Err(Error::Config("zero ordinate outside table window".into()));
        }
        Ok(Self {
            t_low,
            t_high,
            gammas,
            certified,
            n_start,
        })
    }

    pub fn t_low(&self) -> f64 {
        self.t_low
    }

    pub fn t_high(&self) -> f64 {
        self.t_high
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    pub fn len(&self) -> usize {
        self.gammas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gammas.is_empty()
    }

    pub fn certified(&self) -> bool {
        self.certified
    }

    /// Number of zeros with ordinate `<= t_low`.
    pub fn n_start(&self) -> u64 {
        self.n_start
    }

    /// Whether `[lo, hi]` lies inside this table's window.
    pub fn covers(&self, lo: f64, hi: f64) -> bool {
        lo >= self.t_low && hi <= self.t_high
    }

    /// `N(t)` for `t` inside the window.
    pub fn count_below(&self, t: f64) -> Result<u64> {
        if !self.covers(t, t) {
            return Err(Error::Coverage { lo: t, hi: t });
        }
        Ok(self.n_start + self.gammas.partition_point(|&g| g <= t) as u64)
    }

    /// Zeros inside `[lo, hi]`, as a slice of the table.
    pub fn zeros_in(&self, lo: f64, hi: f64) -> &[f64] {
        let i0 = self.gammas.partition_point(|&g| g < lo);
        let i1 = self.gammas.partition_point(|&g| g <= hi);
        &self.gammas[i0..i1]
    }

    /// Distance from `t` to the nearest tabulated zero.
    pub fn nearest_zero_distance(&self, t: f64) -> f64 {
        let i = self.gammas.partition_point(|&g| g < t);
        let mut d = f64::INFINITY;
        if i < self.gammas.len() {
            d = d.min((self.gammas[i] - t).abs_x());
        }
        if i > 0 {
            d = d.min((t - self.gammas[i - 1]).abs_x());
        }
        d
    }
}

/// How one end of the scan window is anchored to an absolute count.
#[derive(Debug, Clone, Copy)]
enum Anchor {
    /// Exact count via |S| < 1 plus the parity of sign Z.
    Parity(f64),
    /// Turing integral over `[lo, hi]`.
    Turing { lo: f64, hi: f64 },
}

fn flank_len(t: f64) -> f64 {
    (40.0 * mean_gap(t)).max(5.0 * turing_bound(t))
}

fn turing_bound(t2: f64) -> f64 {
    2.30 + 0.128 * (t2 / TAU).ln_x()
}

/// Plan anchors and the full scan range for a requested window.
fn plan(a: f64, b: f64) -> (Anchor, Anchor, f64, f64) {
    let left = if a <= PARITY_MAX {
        Anchor::Parity(a)
    } else if a - flank_len(a) >= TURING_MIN {
        Anchor::Turing {
            lo: a - flank_len(a),
            hi: a,
        }
    } else {
        // Too high for parity, too low for a Turing flank: extend the
        // scan down to parity territory.
        Anchor::Parity(250.0)
    };
    let right = if b <= PARITY_MAX {
        Anchor::Parity(b)
    } else {
        let fl = flank_len(b.max(TURING_MIN));
        let lo = b.max(TURING_MIN + fl);
        Anchor::Turing { lo, hi: lo + fl }
    };
    let scan_lo = match left {
        Anchor::Parity(t) => t.min(a),
        Anchor::Turing { lo, .. } => lo,
    };
    let scan_hi = match right {
        Anchor::Parity(t) => t.max(b),
        Anchor::Turing { hi, .. } => hi + mean_gap(hi),
    };
    (left, right, scan_lo, scan_hi)
}

/// Exact `N(t)` below the parity cutoff: `|S| < 1` leaves two
/// candidates, and the sign of `Z` settles the parity (Z < 0 iff N
/// even, anchored at `Z(10) < 0` with `N(10) = 0`).
fn parity_count(engine: &ZetaEngine, t: f64) -> Result<(f64, u64)> {
    let mut te = t;
    for _ in 0..12 {
        let z = engine.z(te)?;
        if z.abs_x() > 1e-4 {
            let theta = engine.theta(te)?;
            let n1 = (theta / PI).floor_x() as i64 + 1;
            let even_candidate = if n1 % 2 == 0 { n1 } else { n1 + 1 };
            let odd_candidate = if n1 % 2 == 0 { n1 + 1 } else { n1 };
            let n = if z < 0.0 { even_candidate } else { odd_candidate };
            if n < 0 {
                return Ok((te, 0));
            }
            return Ok((te, n as u64));
        }
        te += 0.05 * mean_gap(te.max(15.0));
    }
    Err(Error::Domain(format!(
        "could not find a clear-sign anchor near t = {t}"
    )))
}

/// `∫_{t1}^{t2} (θ(t)/π + 1) dt` by composite Simpson.
fn theta_line_integral(engine: &ZetaEngine, t1: f64, t2: f64) -> Result<f64> {
    let panels = (((t2 - t1) / mean_gap(t2.max(15.0))).ceil_x() as usize * 2).max(16);
    let h = (t2 - t1) / panels as f64;
    let g = |t: f64| -> Result<f64> { Ok(engine.theta(t)? / PI + 1.0) };
    let mut acc = g(t1)? + g(t2)?;
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * g(t1 + i as f64 * h)?;
    }
    Ok(acc * h / 3.0)
}

/// `∫_{t1}^{t2} S̃(t) dt` where `S̃ = N_found - θ/π - 1` and
/// `N_found(t1) = n_at_t1`. The counting part integrates exactly:
/// each zero past `t1` contributes `t2 - γ`.
fn s_tilde_integral(
    engine: &ZetaEngine,
    zeros: &[f64],
    t1: f64,
    t2: f64,
    n_at_t1: f64,
) -> Result<f64> {
    let i0 = zeros.partition_point(|&g| g <= t1);
    let i1 = zeros.partition_point(|&g| g <= t2);
    let mut counting = n_at_t1 * (t2 - t1);
    for &g in &zeros[i0..i1] {
        counting += t2 - g;
    }
    Ok(counting - theta_line_integral(engine, t1, t2)?)
}

struct Certification {
    ok: bool,
    /// Absolute count at the scan start (valid when the left anchor
    /// check passed).
    n_at_scan_lo: u64,
    /// Midpoints of suspected misses, for targeted refinement.
    suspects: Vec<f64>,
}

fn count_in(zeros: &[f64], lo: f64, hi: f64) -> usize {
    zeros.partition_point(|&g| g <= hi) - zeros.partition_point(|&g| g <= lo)
}

/// Locate sustained depressions of `S̃`, the signature of missed
/// pairs: every midpoint after a miss sits ~2 below the running band.
/// A exponentially smoothed level tracks the band and snaps down after
/// each detection so consecutive misses register separately. Long
/// scans can hide hundreds of sub-grid pairs, so all suspects are
/// collected per round.
fn find_suspects(
    engine: &ZetaEngine,
    zeros: &[f64],
    scan_lo: f64,
    n_scan_lo: f64,
) -> Result<Vec<f64>> {
    const CAP: usize = 4096;
    let mut suspects = Vec::new();
    let mut level = 0.0f64;
    let mut warm = false;
    let mut running = n_scan_lo + zeros.partition_point(|&g| g <= scan_lo) as f64;
    for i in 0..zeros.len().saturating_sub(1) {
        if zeros[i] > scan_lo {
            running += 1.0;
        }
        let mid = 0.5 * (zeros[i] + zeros[i + 1]);
        if mid <= scan_lo {
            continue;
        }
        let s = running - engine.theta(mid)? / PI - 1.0;
        if !warm {
            level = s;
            warm = true;
        }
        if s < level - 1.4 {
            suspects.push(mid);
            level = s;
            if suspects.len() >= CAP {
                break;
            }
        } else {
            level = 0.9 * level + 0.1 * s;
        }
    }
    Ok(suspects)
}

fn certify(
    engine: &ZetaEngine,
    zeros: &[f64],
    left: Anchor,
    right: Anchor,
    scan_lo: f64,
) -> Result<Certification> {
    // Absolute count at the left anchor point.
    let (left_t, left_n, left_ok) = match left {
        Anchor::Parity(t) => {
            let (te, n) = parity_count(engine, t)?;
            (te, n, true)
        }
        Anchor::Turing { lo, hi } => {
            let n0 = (engine.theta(lo)? / PI + 1.0).round_x();
            let len = hi - lo;
            let integral = s_tilde_integral(engine, zeros, lo, hi, 0.0)?;
            let d = (-(integral + n0 * len) / len).round_x();
            let residual = integral + (n0 + d) * len;
            let ok = residual.abs_x() <= turing_bound(hi) + TURING_SLACK && d.abs_x() <= 3.0;
            (lo, (n0 + d).max(0.0) as u64, ok)
        }
    };
    if !left_ok {
        return Ok(Certification {
            ok: false,
            n_at_scan_lo: 0,
            suspects: find_suspects(engine, zeros, left_t, left_n as f64)?,
        });
    }
    // Count at the start of the scan (anchor may sit inside the scan).
    let n_scan_lo = left_n as i64 - count_in(zeros, scan_lo, left_t) as i64;
    if n_scan_lo < 0 {
        return Err(Error::Domain("negative zero count at scan start".into()));
    }
    let n_scan_lo = n_scan_lo as u64;

    // Right-side completeness check.
    let right_ok = match right {
        Anchor::Parity(t) => {
            let (te, n_right) = parity_count(engine, t)?;
            let expected = left_n as i64 + count_in(zeros, left_t, te) as i64;
            expected == n_right as i64
        }
        Anchor::Turing { lo, hi } => {
            let n_at_lo = left_n as f64 + count_in(zeros, left_t, lo) as f64;
            let integral = s_tilde_integral(engine, zeros, lo, hi, n_at_lo)?;
            let len = hi - lo;
            let d = (-integral / len).round_x();
            d == 0.0 && integral.abs_x() <= turing_bound(hi) + TURING_SLACK
        }
    };
    if !right_ok {
        return Ok(Certification {
            ok: false,
            n_at_scan_lo: n_scan_lo,
            suspects: find_suspects(engine, zeros, scan_lo, n_scan_lo as f64)?,
        });
    }
    Ok(Certification {
        ok: true,
        n_at_scan_lo: n_scan_lo,
        suspects: Vec::new(),
    })
}

/// Evaluate the grid over `[lo, hi]` with spacing `step`, bracket sign
/// changes, and refine each bracket. Returns ascending zeros.
fn scan_range(engine: &ZetaEngine, lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    let n_pts = (((hi - lo) / step).ceil_x() as usize).max(2) + 1;
    const BLOCK: usize = 1 << 20;
    let mut brackets: Vec<(f64, f64, f64, f64)> = Vec::new();
    let mut carry: Option<(f64, f64)> = None;
    let mut i0 = 0usize;
    while i0 < n_pts {
        let i1 = (i0 + BLOCK).min(n_pts);
        let pts: Vec<(f64, f64)> = par_map_indexed(i1 - i0, |k| {
            let mut t = lo + (i0 + k) as f64 * step;
            if t > hi {
                t = hi;
            }
            let mut z = engine.z(t).expect("scan point within engine domain");
            if z.abs_x() < 10.0 * engine.z_error_envelope(t) {
                // Grid point grazes a zero: shift by 1e-5 mean gaps.
                t += 1e-5 * mean_gap(t);
                z = engine.z(t).expect("scan point within engine domain");
            }
            (t, z)
        });
        let mut prev = carry;
        for &(t, z) in &pts {
            if let Some((tp, zp)) = prev {
                if zp.is_sign_negative() != z.is_sign_negative() && tp < t {
                    brackets.push((tp, zp, t, z));
                }
            }
            prev = Some((t, z));
        }
        carry = prev;
        i0 = i1;
    }
    let zeros: Vec<f64> = par_map_indexed(brackets.len(), |k| {
        let (a, fa, b, fb) = brackets[k];
        refine_bracket(engine, a, fa, b, fb)
    });
    Ok(zeros)
}

/// Bracketing refinement (regula falsi with the Illinois adjustment,
/// falling back to bisection) down to a bracket of width `1e-9`.
fn refine_bracket(engine: &ZetaEngine, mut a: f64, mut fa: f64, mut b: f64, mut fb: f64) -> f64 {
    let mut side: i8 = 0;
    for _ in 0..120 {
        if b - a <= ZERO_TOL {
            break;
        }
        let denom = fb - fa;
        let mut c = if denom != 0.0 {
            b - fb * (b - a) / denom
        } else {
            0.5 * (a + b)
        };
        let guard = 1e-3 * (b - a);
        if !c.is_finite() || c <= a + guard || c >= b - guard {
            c = 0.5 * (a + b);
        }
        let fc = engine.z(c).expect("bracket within engine domain");
        if fc == 0.0 {
            return c;
        }
        if fc.is_sign_negative() == fa.is_sign_negative() {
            a = c;
            fa = fc;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        } else {
            b = c;
            fb = fc;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        }
    }
    0.5 * (a + b)
}

fn merge_zeros(mut zeros: Vec<f64>, extra: Vec<f64>) -> Vec<f64> {
    zeros.extend(extra);
    zeros.sort_unstable_by(|x, y| x.partial_cmp(y).expect("finite ordinates"));
    zeros.dedup_by(|x, y| (*x - *y).abs_x() < 10.0 * ZERO_TOL);
    zeros
}

/// Find all zeros in `[t_low, t_high]` and certify completeness.
///
/// The scan extends beyond the requested window as needed by the
/// anchoring strategy; returned ordinates satisfy
/// `t_low < γ <= t_high`.
pub fn find_zeros(engine: &ZetaEngine, t_low: f64, t_high: f64) -> Result<ZeroTable> {
    if t_low < 10.0 || t_low >= t_high {
        return Err(Error::Config(format!(
            "zero window [{t_low}, {t_high}] invalid; need 10 <= t_low < t_high"
        )));
    }
    let (left, right, scan_lo, scan_hi) = plan(t_low, t_high);
    if scan_hi > engine.t_max() {
        return Err(Error::Domain(format!(
            "window needs scanning up to {scan_hi:.1}; engine height is {:.1}",
            engine.t_max()
        )));
    }
    let base_step = mean_gap(scan_hi) / SAMPLES_PER_GAP;
    let mut zeros = scan_range(engine, scan_lo, scan_hi, base_step)?;

    let mut cert = certify(engine, &zeros, left, right, scan_lo)?;
    let mut round = 0usize;
    while !cert.ok && round < MAX_REFINE_ROUNDS {
        round += 1;
        let fine = base_step / 4.0f64.powi_x(round as i32);
        if cert.suspects.is_empty() {
            // No localized drop: rescan everything at the finer step.
            let extra = scan_range(engine, scan_lo, scan_hi, fine)?;
            zeros = merge_zeros(zeros, extra);
        } else {
            for &mid in &cert.suspects {
                let pad = 8.0 * mean_gap(mid);
                let extra = scan_range(
                    engine,
                    (mid - pad).max(scan_lo),
                    (mid + pad).min(scan_hi),
                    fine,
                )?;
                zeros = merge_zeros(zeros, extra);
            }
        }
        cert = certify(engine, &zeros, left, right, scan_lo)?;
    }

    let n_start = cert.n_at_scan_lo + count_in(&zeros, scan_lo, t_low) as u64;
    let gammas: Vec<f64> = zeros
        .iter()
        .copied()
        .filter(|&g| g > t_low && g <= t_high)
        .collect();
    ZeroTable::from_parts(t_low, t_high, gammas, cert.ok, n_start)
}

/// Absolute `N(t)`: the number of zeros with ordinate at most `t`.
pub fn absolute_count_below(engine: &ZetaEngine, t: f64) -> Result<u64> {
    if t <= PARITY_MAX {
        return Ok(parity_count(engine, t)?.1);
    }
    // Anchor a short certified window ending at t.
    let lo = (t - 2.0 * mean_gap(t)).max(10.0);
    let table = find_zeros(engine, lo, t)?;
    if !table.certified() {
        return Err(Error::Uncertified {
            lo,
            hi: t,
        });
    }
    table.count_below(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn engine(t_max: f64) -> ZetaEngine {
        ZetaEngine::new(t_max).unwrap()
    }

    #[test]
    fn first_window_has_ten_zeros() {
        let e = engine(2000.0);
        let table = find_zeros(&e, 10.0, 50.0).unwrap();
        assert!(table.certified());
        assert_eq!(table.len(), 10);
        assert_eq!(table.n_start(), 0);
        let g1 = table.gammas()[0];
        assert!(
            (g1 - 14.134725).abs() < 1e-6,
            "first zero found at {g1}"
        );
    }

    #[test]
    fn twenty_nine_zeros_below_one_hundred() {
        let e = engine(2000.0);
        let table = find_zeros(&e, 10.0, 100.0).unwrap();
        assert!(table.certified());
        assert_eq!(table.len(), 29);
    }

    #[test]
    fn empty_interior_window_certifies() {
        // No zeros between gamma_1 ~ 14.1347 and gamma_2 ~ 21.0220.
        let e = engine(2000.0);
        let table = find_zeros(&e, 14.5, 20.9).unwrap();
        assert!(table.certified());
        assert_eq!(table.len(), 0);
        assert_eq!(table.n_start(), 1);
    }

    #[test]
    fn z_small_on_every_zero() {
        let e = engine(2000.0);
        let table = find_zeros(&e, 10.0, 100.0).unwrap();
        for &g in table.gammas() {
            let z = e.z(g).unwrap();
            assert!(z.abs() <= 1e-6, "Z({g}) = {z}");
        }
    }

    #[test]
    fn sign_of_z_reflects_parity_below_first_two_zeros() {
        let e = engine(2000.0);
        // N(18) = 1 (odd), so Z(18) > 0.
        assert!(e.z(18.0).unwrap() > 0.0);
        assert_eq!(parity_count(&e, 18.0).unwrap().1, 1);
        assert_eq!(parity_count(&e, 15.0).unwrap().1, 1);
        assert_eq!(parity_count(&e, 13.0).unwrap().1, 0);
    }

    #[test]
    fn turing_route_matches_low_route_count() {
        // Count zeros up to 1000 once through the parity ladder
        // (scan from 10) and once through the Turing-anchored window.
        let e = engine(3000.0);
        let low = find_zeros(&e, 10.0, 1000.0).unwrap();
        assert!(low.certified());
        let n_1000 = low.n_start() + low.len() as u64;
        assert_eq!(n_1000, 649);

        let high = find_zeros(&e, 990.0, 1010.0).unwrap();
        assert!(high.certified());
        assert_eq!(high.count_below(1000.0).unwrap(), 649);
    }

    #[test]
    fn rvm_count_consistency_on_certified_window() {
        let e = engine(3000.0);
        let t = find_zeros(&e, 1000.0, 1200.0).unwrap();
        assert!(t.certified());
        // |gammas| equals the Riemann–von Mangoldt difference with the
        // S contributions implied by the certificate.
        let expected = t.count_below(1200.0).unwrap() - t.n_start();
        assert_eq!(expected, t.len() as u64);
        // And the crude theta-difference is within the |S| budget.
        let theta_diff =
            (e.theta(1200.0).unwrap() - e.theta(1000.0).unwrap()) / PI;
        assert!((t.len() as f64 - theta_diff).abs() < 3.0);
    }

    #[test]
    fn table_queries() {
        let e = engine(2000.0);
        let t = find_zeros(&e, 10.0, 60.0).unwrap();
        assert_eq!(t.zeros_in(20.0, 26.0).len(), 2); // 21.022, 25.011
        assert!(t.nearest_zero_distance(14.13) < 0.01);
        assert!(t.count_below(5.0).is_err());
        assert_eq!(t.count_below(30.0).unwrap(), 3);
    }

    #[test]
    fn mean_gap_scale_is_sane() {
        // ~649 zeros below 1000 means the gap near 1000 is ~ 2π/log(1000/2π).
        let g = mean_gap(1000.0);
        assert!((g - TAU / (1000.0f64 / TAU).ln()).abs() < 1e-12);
        assert!(g > 1.0 && g < 1.5);
    }
}
