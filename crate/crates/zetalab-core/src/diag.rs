//! Diagonal main-term combinatorics and brute-force oracles.
//!
//! The diagonal value of the mixed Dirichlet-polynomial moment
//! `M(h,ℓ,k) = (1/T)∫ P_x^h conj(P_x)^ℓ (S*_φ)^k` is
//!
//! ```text
//!   Σ_{J ⊆ {1..k}} Σ_{p_i, q_i <= x; n_j}  Π w_p(p_i) Π w_p(q_i) Π w_n(n_j)
//!        × 1( Π p_i Π_{j∈J} n_j = Π q_i Π_{j∈J^c} n_j )
//! ```
//!
//! with `w_p(p) = p^{-1/2}` and
//! `w_n(n) = -Λ*(n) φ̂(log n/log T) / (√n log T)`, one `-1/log T` per
//! `n` occurrence (which reproduces the `(-1)^k/(log T)^k` prefactor).
//!
//! Two independent evaluators are provided: nested-loop enumeration
//! over every variable tuple with an exact integer product indicator,
//! and grouping both sides of the identity by product value followed by
//! a convolution. Because `n` runs over primes and prime squares only,
//! every solution of the product identity decomposes into ten basic
//! relations between two or three prime powers; `relation_sums`
//! evaluates those directly, and `predicted_moment` assembles the
//! pairing-only main term `h! S₁^h (k!/(k/2)!) S₄^{k/2}`.

use alloc::format;
use alloc::vec::Vec;

use crate::math::FloatExt;
use crate::primes::PrimeTable;
use crate::testfn::TestFunction;
use crate::{Error, Result};

/// The ten relation sums, 1-indexed via [`RelationSums::s`].
///
/// Order: `p=q`, `n=q`, `p=n`, `n=n'` (two prime powers), then
/// `pp'=n`, `pn=n'`, `nn'=n''`, `n=qq'`, `n=qn'`, `n=n'n''`.
#[derive(Debug, Clone)]
pub struct RelationSums {
    values: [f64; 10],
    pub x: f64,
    pub t_big: f64,
}

impl RelationSums {
    /// 1-indexed accessor matching the relation order.
    pub fn s(&self, i: usize) -> f64 {
        self.values[i - 1]
    }
}

/// Evaluate all ten relation sums by direct summation.
pub fn relation_sums(
    x: f64,
    t_big: f64,
    tf: &TestFunction,
    table: &PrimeTable,
) -> Result<RelationSums> {
    let ln_t = t_big.ln_x();
    let n_max = (tf.eta() * ln_t).exp_x();
    if x > table.limit() as f64 || n_max > table.limit() as f64 + 1.0 {
        return Err(Error::TableRange {
            requested: x.max(n_max),
            limit: table.limit() as f64,
        });
    }
    let hat1 = |p: f64| tf.hat(p.ln_x() / ln_t);
    let hat2 = |p: f64| tf.hat(2.0 * p.ln_x() / ln_t);

    let mut s1 = 0.0;
    let mut s2 = 0.0;
    let mut s5 = 0.0;
    let mut s6 = 0.0;
    let mut s7 = 0.0;
    for &p in table.primes() {
        let pf = p as f64;
        let lp = pf.ln_x();
        // S₁ runs over the full polynomial range; the transform support
        // only truncates the sums that carry a φ̂ factor.
        if pf > x && lp > tf.eta() * ln_t {
            break;
        }
        if pf <= x {
            s1 += 1.0 / pf;
            // n = q: a prime in both the polynomial range and the
            // transform support.
            s2 += -lp * hat1(pf) / (pf * ln_t);
            // p p' = n forces p = p', n = p².
            s5 += -lp * hat2(pf) / (pf * pf * ln_t);
            // p n = n' forces n = p, n' = p².
            s6 += lp * lp * hat1(pf) * hat2(pf) / (pf * pf * ln_t * ln_t);
        }
        // n n' = n'' forces n = n' = p, n'' = p²; no x constraint.
        s7 += -lp * lp * lp * hat1(pf) * hat1(pf) * hat2(pf) / (pf * pf * ln_t * ln_t * ln_t);
    }
    // n = n': the square of the truncated coefficient per prime power.
    let mut s4 = 0.0;
    let mut n = 2u64;
    while (n as f64) < n_max {
        if let Some((p, alpha)) = table.prime_power(n)? {
            if alpha <= 2 {
                let lp = (p as f64).ln_x();
                let h = tf.hat((n as f64).ln_x() / ln_t);
                s4 += lp * lp * h * h / (n as f64 * ln_t * ln_t);
            }
        }
        n += 1;
    }
    Ok(RelationSums {
        // S2 = S3 and the three-power sums mirror (q side = p side).
        values: [s1, s2, s2, s4, s5, s6, s7, s5, s6, s7],
        x,
        t_big,
    })
}

/// Parity-respecting count of main-term index selections:
/// `h! · k!/(k/2)!` when `h = ℓ` and `k` even, else zero.
pub fn matching_count(h: u32, l: u32, k: u32) -> u64 {
    if h != l || k % 2 == 1 {
        return 0;
    }
    let fact = |m: u32| -> u64 { (1..=m as u64).product::<u64>().max(1) };
    fact(h) * fact(k) / fact(k / 2)
}

/// `μ_k = (k-1)!!` for even `k`, zero for odd.
pub fn gaussian_moment(k: u32) -> f64 {
    if k % 2 == 1 {
        return 0.0;
    }
    let mut acc = 1.0;
    let mut m = k as i64 - 1;
    while m > 1 {
        acc *= m as f64;
        m -= 2;
    }
    acc
}

/// Enumerative oracle for [`matching_count`]: walk every subset `J`,
/// every pairing of the `p` symbols with the `q` symbols and of the
/// `J` side with the `J^c` side, and verify the formal product
/// identity over fresh symbolic primes before counting.
pub fn matching_count_bruteforce(h: u32, l: u32, k: u32) -> Result<u64> {
    if h + l + k > 8 {
        return Err(Error::Budget(format!(
            "matching enumeration limited to h+l+k <= 8, got {}",
            h + l + k
        )));
    }
    let h = h as usize;
    let l = l as usize;
    let k = k as usize;
    let mut count = 0u64;
    // Symbols: p_i gets i, n_j gets 1000 + j; q and J^c-side symbols are
    // assigned through the candidate bijections.
    for mask in 0u32..(1 << k) {
        let j_side: Vec<usize> = (0..k).filter(|j| mask >> j & 1 == 1).collect();
        let jc_side: Vec<usize> = (0..k).filter(|j| mask >> j & 1 == 0).collect();
        if h != l || j_side.len() != jc_side.len() {
            continue;
        }
        for sigma in permutations(l) {
            for tau in permutations(jc_side.len()) {
                // Build both formal products as sorted symbol multisets.
                let mut left: Vec<usize> = Vec::with_capacity(h + j_side.len());
                let mut right: Vec<usize> = Vec::with_capacity(l + jc_side.len());
                for i in 0..h {
                    left.push(i);
                }
                for &j in &j_side {
                    left.push(1000 + j);
                }
                // q_{i'} shares the symbol of p_{sigma(i')}; n_{j'} (j' in
                // J^c) shares the symbol of its partner in J.
                for s in sigma.iter().take(l) {
                    right.push(*s);
                }
                for (slot, _) in jc_side.iter().enumerate() {
                    right.push(1000 + j_side[tau[slot]]);
                }
                left.sort_unstable();
                right.sort_unstable();
                if left == right {
                    count += 1;
                }
            }
        }
    }
    Ok(count)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return alloc::vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for pos in 0..=rest.len() {
            let mut v = rest.clone();
            v.insert(pos, n - 1);
            out.push(v);
        }
    }
    out
}

/// The pairing-only finite-height main term
/// `h! S₁^h (k!/(k/2)!) S₄^{k/2}`; zero unless `h = ℓ` and `k` even.
pub fn predicted_moment(h: u32, l: u32, k: u32, sums: &RelationSums) -> f64 {
    let m = matching_count(h, l, k);
    if m == 0 && !(h == 0 && l == 0 && k == 0) {
        return 0.0;
    }
    let fact = |m: u32| -> f64 { (1..=m as u64).product::<u64>().max(1) as f64 };
    if h != l || k % 2 == 1 {
        return 0.0;
    }
    fact(h) * sums.s(1).powi_x(h as i32) * (fact(k) / fact(k / 2))
        * sums.s(4).powi_x(k as i32 / 2)
}

/// Limit prediction `1(h=ℓ) μ_k σ_φ^k h! (log log T)^h`.
pub fn asymptotic_prediction(h: u32, l: u32, k: u32, t_big: f64, tf: &TestFunction) -> f64 {
    if h != l {
        return 0.0;
    }
    let fact = (1..=h as u64).product::<u64>().max(1) as f64;
    gaussian_moment(k)
        * tf.sigma_sq().powf_x(k as f64 / 2.0)
        * fact
        * t_big.ln_x().ln_x().powi_x(h as i32)
}

struct DiagonalInputs {
    /// `(value, p^{-1/2})` for `p <= x`.
    p_terms: Vec<(u64, f64)>,
    /// `(value, -Λ*(n) φ̂(log n/log T)/(√n log T))` over the support.
    n_terms: Vec<(u64, f64)>,
}

fn diagonal_inputs(
    x: f64,
    t_big: f64,
    tf: &TestFunction,
    table: &PrimeTable,
) -> Result<DiagonalInputs> {
    let ln_t = t_big.ln_x();
    let n_max = (tf.eta() * ln_t).exp_x();
    if x > table.limit() as f64 || n_max > table.limit() as f64 + 1.0 {
        return Err(Error::TableRange {
            requested: x.max(n_max),
            limit: table.limit() as f64,
        });
    }
    let mut p_terms = Vec::new();
    for &p in table.primes() {
        if (p as f64) > x {
            break;
        }
        p_terms.push((p, 1.0 / (p as f64).sqrt_x()));
    }
    let mut n_terms = Vec::new();
    let mut n = 2u64;
    while (n as f64) < n_max {
        if let Some((p, alpha)) = table.prime_power(n)? {
            if alpha <= 2 {
                let w = tf.hat((n as f64).ln_x() / ln_t);
                if w != 0.0 {
                    n_terms.push((n, -(p as f64).ln_x() * w / ((n as f64).sqrt_x() * ln_t)));
                }
            }
        }
        n += 1;
    }
    Ok(DiagonalInputs { p_terms, n_terms })
}

fn check_nested_budget(h: u32, l: u32, k: u32, x: f64, t_big: f64, tf: &TestFunction) -> Result<()> {
    let n_max = (tf.eta() * t_big.ln_x()).exp_x();
    if x > 50.0 || n_max > 201.0 || h + l + k > 7 {
        return Err(Error::Budget(format!(
            "nested enumeration limited to x <= 50, T^eta <= 200, h+l+k <= 7 \
             (got x = {x}, T^eta = {n_max:.1}, orders {h}+{l}+{k})"
        )));
    }
    Ok(())
}

/// Exact diagonal by nested-loop enumeration with an integer product
/// indicator. A perfect-square prefilter on `Πp Πq Πn` rejects tuples
/// that cannot satisfy the identity for any `J`.
#[allow(clippy::needless_range_loop)]
pub fn diagonal_nested(
    h: u32,
    l: u32,
    k: u32,
    x: f64,
    t_big: f64,
    tf: &TestFunction,
    table: &PrimeTable,
) -> Result<f64> {
    check_nested_budget(h, l, k, x, t_big, tf)?;
    let inp = diagonal_inputs(x, t_big, tf, table)?;
    let (h, l, k) = (h as usize, l as usize, k as usize);
    if (h + l > 0 && inp.p_terms.is_empty() && h + l > 0) || (k > 0 && inp.n_terms.is_empty()) {
        // Empty ranges: only the all-empty product (h=l=k=0) survives.
        return Ok(if h == 0 && l == 0 && k == 0 { 1.0 } else { 0.0 });
    }

    // Odometer over (p_1..p_h, q_1..q_l, n_1..n_k).
    let mut idx = alloc::vec![0usize; h + l + k];
    let mut total = 0.0f64;
    'outer: loop {
        // Assemble products and weights for the current tuple.
        let mut p_prod: u128 = 1;
        let mut q_prod: u128 = 1;
        let mut n_prod: u128 = 1;
        let mut weight = 1.0f64;
        for i in 0..h {
            let (v, w) = inp.p_terms[idx[i]];
            p_prod *= v as u128;
            weight *= w;
        }
        for i in 0..l {
            let (v, w) = inp.p_terms[idx[h + i]];
            q_prod *= v as u128;
            weight *= w;
        }
        for i in 0..k {
            let (v, w) = inp.n_terms[idx[h + l + i]];
            n_prod *= v as u128;
            weight *= w;
        }
        // Any J with Πp Π_J n = Πq Π_{J^c} n forces Πp Πq Πn to be a
        // perfect square.
        if is_square(p_prod * q_prod * n_prod) {
            for mask in 0u32..(1u32 << k) {
                let mut left = p_prod;
                let mut right = q_prod;
                for j in 0..k {
                    let v = inp.n_terms[idx[h + l + j]].0 as u128;
                    if mask >> j & 1 == 1 {
                        left *= v;
                    } else {
                        right *= v;
                    }
                }
                if left == right {
                    total += weight;
                }
            }
        }
        // Advance the odometer.
        for slot in (0..idx.len()).rev() {
            let cap = if slot < h + l {
                inp.p_terms.len()
            } else {
                inp.n_terms.len()
            };
            idx[slot] += 1;
            if idx[slot] < cap {
                continue 'outer;
            }
            idx[slot] = 0;
        }
        break;
    }
    Ok(total)
}

fn is_square(v: u128) -> bool {
    let r = (v as f64).sqrt_x() as u128;
    for c in r.saturating_sub(2)..=r + 2 {
        if c * c == v {
            return true;
        }
    }
    false
}

/// Exact diagonal by grouping each side of the identity by product
/// value and convolving — the independent oracle for
/// [`diagonal_nested`].
pub fn diagonal_grouped(
    h: u32,
    l: u32,
    k: u32,
    x: f64,
    t_big: f64,
    tf: &TestFunction,
    table: &PrimeTable,
) -> Result<f64> {
    if h + l + k > 8 {
        return Err(Error::Budget(format!(
            "grouped evaluation limited to h+l+k <= 8, got {}",
            h + l + k
        )));
    }
    let inp = diagonal_inputs(x, t_big, tf, table)?;
    let mut total = 0.0;
    for m in 0..=k {
        // Ordered draws: sides built by repeated convolution, then the
        // position choice contributes C(k, m).
        let left = product_distribution(&inp, h as usize, m as usize);
        let right = product_distribution(&inp, l as usize, (k - m) as usize);
        let mut dot = 0.0;
        let (mut i, mut j) = (0, 0);
        while i < left.len() && j < right.len() {
            match left[i].0.cmp(&right[j].0) {
                core::cmp::Ordering::Less => i += 1,
                core::cmp::Ordering::Greater => j += 1,
                core::cmp::Ordering::Equal => {
                    dot += left[i].1 * right[j].1;
                    i += 1;
                    j += 1;
                }
            }
        }
        total += binomial(k, m) * dot;
    }
    Ok(total)
}

fn binomial(n: u32, m: u32) -> f64 {
    let mut acc = 1.0f64;
    for i in 0..m {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Distribution of `Π` values over `n_p` prime draws and `n_n`
/// truncated-von-Mangoldt draws, as a sorted `(product, weight)` list.
fn product_distribution(inp: &DiagonalInputs, n_p: usize, n_n: usize) -> Vec<(u128, f64)> {
    let mut acc: Vec<(u128, f64)> = alloc::vec![(1u128, 1.0f64)];
    for _ in 0..n_p {
        acc = convolve(&acc, &inp.p_terms);
    }
    for _ in 0..n_n {
        acc = convolve(&acc, &inp.n_terms);
    }
    acc
}

fn convolve(acc: &[(u128, f64)], terms: &[(u64, f64)]) -> Vec<(u128, f64)> {
    let mut out = Vec::with_capacity(acc.len() * terms.len());
    for &(v, w) in acc {
        for &(tv, tw) in terms {
            out.push((v * tv as u128, w * tw));
        }
    }
    out.sort_unstable_by_key(|e| e.0);
    let mut merged: Vec<(u128, f64)> = Vec::with_capacity(out.len());
    for (v, w) in out {
        match merged.last_mut() {
            Some(last) if last.0 == v => last.1 += w,
            _ => merged.push((v, w)),
        }
    }
    merged
}

/// How a diagonal value was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagonalMethod {
    BruteforceNested,
    BruteforceGrouped,
    MainTermFormula,
}

/// A cross-checked diagonal evaluation.
#[derive(Debug, Clone, Copy)]
pub struct DiagonalValue {
    pub h: u32,
    pub l: u32,
    pub k: u32,
    pub value: f64,
    pub method: DiagonalMethod,
}

/// Run both brute-force evaluators and require agreement to `1e-10`.
pub fn diagonal_bruteforce(
    h: u32,
    l: u32,
    k: u32,
    x: f64,
    t_big: f64,
    tf: &TestFunction,
    table: &PrimeTable,
) -> Result<DiagonalValue> {
    let nested = diagonal_nested(h, l, k, x, t_big, tf, table)?;
    let grouped = diagonal_grouped(h, l, k, x, t_big, tf, table)?;
    if (nested - grouped).abs_x() > 1e-10 * (1.0 + nested.abs_x()) {
        return Err(Error::Domain(format!(
            "diagonal evaluators disagree: nested {nested} vs grouped {grouped}"
        )));
    }
    Ok(DiagonalValue {
        h,
        l,
        k,
        value: nested,
        method: DiagonalMethod::BruteforceNested,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testfn::Family;
    use approx::assert_relative_eq;

    fn toy() -> (f64, f64, TestFunction, PrimeTable) {
        // T^eta ≈ 158 keeps the n-range inside the nested budget.
        let t_big = 1.0e4;
        let tf = TestFunction::new(Family::SmoothBumpHat, 0.55).unwrap();
        let table = PrimeTable::build(1000).unwrap();
        (30.0, t_big, tf, table)
    }

    #[test]
    fn empty_diagonal_for_single_prime() {
        let (x, t_big, tf, table) = toy();
        let v = diagonal_bruteforce(1, 0, 0, x, t_big, &tf, &table).unwrap();
        assert_eq!(v.value, 0.0);
    }

    #[test]
    fn pair_of_polynomials_gives_reciprocal_sum() {
        let (_, t_big, tf, table) = toy();
        let v = diagonal_bruteforce(1, 1, 0, 50.0, t_big, &tf, &table).unwrap();
        let expect = table.prime_reciprocal_sum(50.0).unwrap();
        assert_relative_eq!(v.value, expect, epsilon = 1e-12);
    }

    #[test]
    fn second_moment_is_twice_s4() {
        let (x, t_big, tf, table) = toy();
        let v = diagonal_bruteforce(0, 0, 2, x, t_big, &tf, &table).unwrap();
        let sums = relation_sums(x, t_big, &tf, &table).unwrap();
        assert_relative_eq!(v.value, 2.0 * sums.s(4), epsilon = 1e-12);
    }

    #[test]
    fn mixed_moment_decomposes_into_relation_sums() {
        // For each J, the (1,1,2) diagonal splits into the two pairing
        // patterns {p=q, n=n'} and {n=q, p=n'}; tuples with all four
        // variables equal satisfy both, so inclusion-exclusion
        // subtracts the overlap D = Σ_p log²p φ̂(log p/log T)²/(log²T p²):
        //   M_diag(1,1,2) = 2 (S₁ S₄ + S₂ S₃ - D).
        let (x, t_big, tf, table) = toy();
        let v = diagonal_bruteforce(1, 1, 2, x, t_big, &tf, &table).unwrap();
        let sums = relation_sums(x, t_big, &tf, &table).unwrap();
        let ln_t = t_big.ln();
        let mut overlap = 0.0;
        for &p in table.primes() {
            if (p as f64) > x {
                break;
            }
            let pf = p as f64;
            let h = tf.hat(pf.ln() / ln_t);
            overlap += pf.ln().powi(2) * h * h / (ln_t * ln_t * pf * pf);
        }
        let expect = 2.0 * (sums.s(1) * sums.s(4) + sums.s(2) * sums.s(3) - overlap);
        assert_relative_eq!(v.value, expect, epsilon = 1e-12, max_relative = 1e-10);
        // The gap to the pairing-only main term is exactly the cross
        // term (minus the overlap), which shrinks with the height.
        let main = predicted_moment(1, 1, 2, &sums);
        assert!(
            (v.value - main).abs() <= 2.0 * (sums.s(2) * sums.s(3)).abs() + 1e-12,
            "correction {} bigger than the cross term",
            v.value - main
        );
    }

    #[test]
    fn oracle_agreement_across_orders() {
        let (x, t_big, tf, table) = toy();
        for (h, l, k) in [
            (0, 0, 0),
            (1, 0, 0),
            (0, 0, 1),
            (1, 1, 0),
            (2, 1, 0),
            (0, 0, 2),
            (1, 0, 2),
            (1, 1, 1),
            (0, 0, 3),
            (2, 0, 1),
        ] {
            let nested = diagonal_nested(h, l, k, x, t_big, &tf, &table).unwrap();
            let grouped = diagonal_grouped(h, l, k, x, t_big, &tf, &table).unwrap();
            assert!(
                (nested - grouped).abs() <= 1e-10 * (1.0 + nested.abs()),
                "({h},{l},{k}): {nested} vs {grouped}"
            );
        }
    }

    #[test]
    fn budget_errors() {
        let (_, t_big, tf, table) = toy();
        assert!(matches!(
            diagonal_nested(4, 4, 0, 30.0, t_big, &tf, &table),
            Err(Error::Budget(_))
        ));
        assert!(matches!(
            diagonal_nested(1, 1, 0, 51.0, t_big, &tf, &table),
            Err(Error::Budget(_))
        ));
        assert!(matches!(
            matching_count_bruteforce(4, 4, 2),
            Err(Error::Budget(_))
        ));
    }

    #[test]
    fn matching_counts_and_gaussian_moments() {
        assert_eq!(matching_count(0, 0, 4), 12);
        // 12 · (1/2)² = 3 = μ₄.
        assert_relative_eq!(12.0 * 0.25, gaussian_moment(4), epsilon = 1e-15);
        assert_eq!(matching_count(2, 2, 0), 2);
        assert_eq!(matching_count(1, 2, 0), 0);
        assert_eq!(matching_count(0, 0, 3), 0);
        for k in (0..=12).step_by(2) {
            let m = matching_count(0, 0, k) as f64 * 0.5f64.powi(k as i32 / 2);
            assert_relative_eq!(m, gaussian_moment(k), epsilon = 1e-12);
        }
    }

    #[test]
    fn matching_bruteforce_agrees() {
        for h in 0..=2u32 {
            for l in 0..=2u32 {
                for k in (0..=4u32).step_by(2) {
                    let fast = matching_count(h, l, k);
                    let slow = matching_count_bruteforce(h, l, k).unwrap();
                    assert_eq!(fast, slow, "({h},{l},{k})");
                }
            }
        }
        assert_eq!(matching_count_bruteforce(0, 0, 2).unwrap(), 2);
        assert_eq!(matching_count_bruteforce(1, 1, 2).unwrap(), 2);
        assert_eq!(matching_count_bruteforce(0, 0, 3).unwrap(), 0);
    }

    #[test]
    fn relation_sum_values() {
        let (_, t_big, tf, table) = toy();
        let sums = relation_sums(100.0, t_big, &tf, &table).unwrap();
        // S₁ is the plain reciprocal sum.
        assert_relative_eq!(
            sums.s(1),
            table.prime_reciprocal_sum(100.0).unwrap(),
            epsilon = 1e-14
        );
        // S₃ matches its displayed form.
        let ln_t = t_big.ln();
        let mut s3 = 0.0;
        for &p in table.primes() {
            if p > 100 {
                break;
            }
            let pf = p as f64;
            s3 += -pf.ln() * tf.hat(pf.ln() / ln_t) / (pf * ln_t);
        }
        assert_relative_eq!(sums.s(3), s3, epsilon = 1e-14);
        // Boundedness: the two-power cross sums are O(1), the
        // three-power sums are O(1/log T).
        assert!(sums.s(2).abs() <= 10.0 && sums.s(3).abs() <= 10.0);
        for i in 5..=10 {
            assert!(
                sums.s(i).abs() <= 10.0 / ln_t,
                "S_{i} = {} too large",
                sums.s(i)
            );
        }
    }

    #[test]
    fn s4_approaches_half_sigma_sq_like_one_over_log() {
        // S₄ = σ²/2 + O(1/log T). Direct summation at T = 10⁶ gives
        // S₄/(σ²/2) ≈ 0.84: the deficit constant is ~2.2, so a 10%
        // agreement is out of reach at this height. Pin the measured
        // band and verify the 1/log T decay by scaling the height.
        let tf = TestFunction::new(Family::SmoothBumpHat, 0.4).unwrap();
        let table = PrimeTable::build(3000).unwrap();
        let half_sigma = 0.5 * tf.sigma_sq();
        let s4_6 = relation_sums(100.0, 1.0e6, &tf, &table).unwrap().s(4);
        assert!(
            (s4_6 / half_sigma - 1.0).abs() <= 0.2,
            "S₄/(σ²/2) = {} at T = 10⁶",
            s4_6 / half_sigma
        );
        let c6 = (half_sigma - s4_6) * 1.0e6f64.ln() / half_sigma;
        let s4_8 = relation_sums(100.0, 1.0e8, &tf, &table).unwrap().s(4);
        let c8 = (half_sigma - s4_8) * 1.0e8f64.ln() / half_sigma;
        assert!(
            c6 > 0.5 && c6 < 5.0 && c8 > 0.5 && c8 < 5.0 && (c6 - c8).abs() < 2.0,
            "deficit constants drift: {c6:.3} at 10⁶ vs {c8:.3} at 10⁸"
        );
    }

    #[test]
    fn predicted_moment_instances() {
        let (x, t_big, tf, table) = toy();
        let sums = relation_sums(x, t_big, &tf, &table).unwrap();
        assert_relative_eq!(
            predicted_moment(0, 0, 2, &sums),
            2.0 * sums.s(4),
            epsilon = 1e-15
        );
        assert_relative_eq!(predicted_moment(1, 1, 0, &sums), sums.s(1), epsilon = 1e-15);
        assert_relative_eq!(
            predicted_moment(1, 1, 2, &sums),
            sums.s(1) * 2.0 * sums.s(4),
            epsilon = 1e-15
        );
        assert_eq!(predicted_moment(1, 2, 0, &sums), 0.0);
        assert_eq!(predicted_moment(0, 0, 3, &sums), 0.0);
    }

    #[test]
    fn asymptotic_prediction_instances() {
        let tf = TestFunction::new(Family::SmoothBumpHat, 0.4).unwrap();
        let s2 = tf.sigma_sq();
        assert_relative_eq!(
            asymptotic_prediction(0, 0, 4, 1e6, &tf),
            3.0 * s2 * s2,
            epsilon = 1e-12
        );
        assert_eq!(asymptotic_prediction(2, 1, 2, 1e6, &tf), 0.0);
        assert_relative_eq!(
            asymptotic_prediction(1, 1, 0, 1e6, &tf),
            (1e6f64).ln().ln(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn prediction_stays_bounded_in_x() {
        // predicted(h,h,k)/S₁^h is x-free by construction; verify the
        // assembled values across growing x.
        let tf = TestFunction::new(Family::SmoothBumpHat, 0.4).unwrap();
        let table = PrimeTable::build(100_000).unwrap();
        let mut ratios = Vec::new();
        for x in [1e3, 1e4, 1e5] {
            let sums = relation_sums(x, 1e6, &tf, &table).unwrap();
            let p = predicted_moment(2, 2, 2, &sums);
            ratios.push(p / sums.s(1).powi(2));
        }
        for w in ratios.windows(2) {
            assert_relative_eq!(w[0], w[1], epsilon = 1e-12);
        }
    }
}
