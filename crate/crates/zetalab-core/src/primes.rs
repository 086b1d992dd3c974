//! Primes, the von Mangoldt function `Λ`, and its truncation `Λ*`.
//!
//! A least-prime-factor sieve backs the table so `Λ` and `Λ*` reduce
//! to an `O(log n)` factor walk; the moment loops downstream perform
//! millions of lookups.

use alloc::format;
use alloc::vec::Vec;

use crate::math::FloatExt;
use crate::{Error, Result};

/// Sieve-backed table valid for all `n <= limit`.
///
/// Immutable after construction; shared freely across worker threads.
pub struct PrimeTable {
    limit: u64,
    /// `lpf[n]` = least prime factor of `n` (0 for n < 2).
    lpf: Vec<u32>,
    primes: Vec<u64>,
}

impl PrimeTable {
    /// Build the sieve for `2 <= limit <= 10^9`.
    ///
    /// Memory is four bytes per integer up to `limit`; typical runs
    /// use limits of at most a few times `10^7`.
    pub fn build(limit: u64) -> Result<Self> {
        if !(2..=1_000_000_000).contains(&limit) {
            return Err(Error::Config(format!(
                "prime table limit {limit} outside [2, 10^9]"
            )));
        }
        let n = limit as usize;
        let mut lpf = alloc::vec![0u32; n + 1];
        let mut primes = Vec::new();
        // Linear sieve: every composite is crossed exactly once by its
        // least prime factor.
        for i in 2..=n {
            if lpf[i] == 0 {
                lpf[i] = i as u32;
                primes.push(i as u64);
            }
            let li = lpf[i] as usize;
            for &p in &primes {
                let p = p as usize;
                if p > li || p * i > n {
                    break;
                }
                lpf[p * i] = p as u32;
            }
        }
        Ok(Self { limit, lpf, primes })
    }

    /// Upper bound of the table.
    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Ascending list of primes `<= limit`.
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Number of primes `<= limit`.
    pub fn prime_count(&self) -> usize {
        self.primes.len()
    }

    fn check_range(&self, n: u64) -> Result<()> {
        if n > self.limit {
            return Err(Error::TableRange {
                requested: n as f64,
                limit: self.limit as f64,
            });
        }
        Ok(())
    }

    /// Whether `n` is prime.
    pub fn is_prime(&self, n: u64) -> Result<bool> {
        self.check_range(n)?;
        Ok(n >= 2 && self.lpf[n as usize] as u64 == n)
    }

    /// Decompose `n` as `p^alpha` if it is a prime power, else `None`.
    pub fn prime_power(&self, n: u64) -> Result<Option<(u64, u32)>> {
        self.check_range(n)?;
        if n < 2 {
            return Ok(None);
        }
        let p = self.lpf[n as usize] as u64;
        let mut m = n;
        let mut alpha = 0u32;
        while m > 1 {
            if self.lpf[m as usize] as u64 != p {
                return Ok(None);
            }
            m /= p;
            alpha += 1;
        }
        Ok(Some((p, alpha)))
    }

    /// `Λ(n)`: `log p` when `n = p^alpha`, zero otherwise.
    pub fn von_mangoldt(&self, n: u64) -> Result<f64> {
        Ok(match self.prime_power(n)? {
            Some((p, _)) => (p as f64).ln_x(),
            None => 0.0,
        })
    }

    /// `Λ*(n)`: `log p` when `n = p` or `n = p^2`, zero otherwise.
    ///
    /// Truncating the prime-power sum at squares keeps every later
    /// diagonal argument within two factor classes.
    pub fn von_mangoldt_star(&self, n: u64) -> Result<f64> {
        Ok(match self.prime_power(n)? {
            Some((p, alpha)) if alpha <= 2 => (p as f64).ln_x(),
            _ => 0.0,
        })
    }

    /// Exact finite sum `Σ_{p <= x} 1/p`.
    pub fn prime_reciprocal_sum(&self, x: f64) -> Result<f64> {
        if x > self.limit as f64 {
            return Err(Error::TableRange {
                requested: x,
                limit: self.limit as f64,
            });
        }
        let mut s = 0.0;
        for &p in &self.primes {
            if (p as f64) > x {
                break;
            }
            s += 1.0 / p as f64;
        }
        Ok(s)
    }

    /// Chebyshev sum `Σ_{n <= y} Λ(n)`.
    pub fn chebyshev_psi(&self, y: u64) -> Result<f64> {
        self.check_range(y)?;
        let mut s = 0.0;
        for &p in &self.primes {
            if p > y {
                break;
            }
            let lp = (p as f64).ln_x();
            let mut q = p;
            loop {
                s += lp;
                if q > y / p {
                    break;
                }
                q *= p;
            }
        }
        Ok(s)
    }
}
