//! Numerical laboratory for the value distribution of the Riemann zeta
//! function on the critical line and the linear statistics of its zeros.
//!
//! The crate is organised bottom-up:
//!
//! * [`primes`] — sieve-backed tables of primes and the von Mangoldt
//!   function `Λ` together with its truncation `Λ*` (primes and prime
//!   squares only).
//! * [`zeta`] — Riemann–Siegel evaluation of the Hardy `Z` function,
//!   the phase `θ(t)`, and zero tables certified complete by Turing's
//!   method.
//! * [`testfn`] — admissible test functions `φ` with compactly
//!   supported Fourier transform, cached for fast evaluation.
//! * [`stats`] — the pointwise statistics: the smoothed zero count
//!   `N_φ(t)`, its prime-sum proxies `S_φ(t)` and `S*_φ(t)`, the prime
//!   Dirichlet polynomial `P_x(t)`, and `log ζ(1/2+it)`.
//! * [`quad`] — deterministic quadrature over `[T, 2T]` (full grid or
//!   seeded stratified sampling) with bit-stable reduction.
//! * [`diag`] — diagonal main-term combinatorics: relation sums,
//!   brute-force diagonal evaluation, matching counts, predictions.
//! * [`moments`] — joint weighted moments, the log-zeta/zero-count
//!   correlation, Dirichlet-twist integrals, and weighted empirical
//!   distribution statistics.
//!
//! The crate is `no_std`-compatible (with `alloc`); enable the `std`
//! feature (default) for native float intrinsics and the `parallel`
//! feature for rayon-backed scans and quadrature.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod diag;
pub mod error;
pub mod math;
pub mod moments;
pub mod primes;
pub mod quad;
pub mod stats;
pub mod testfn;
pub mod zeta;

pub use error::Error;
pub use num_complex::Complex64;

/// Crate result type.
pub type Result<T> = core::result::Result<T, Error>;
