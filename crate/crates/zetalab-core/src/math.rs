//! Small float/complex toolkit.
//!
//! Transcendentals route through [`FloatExt`] so the crate builds both
//! with `std` (native intrinsics) and without (libm). `erfc` always
//! comes from libm since std does not expose it.

use num_complex::Complex64;

/// Float operations used across the crate, dispatching to std or libm.
pub trait FloatExt: Sized {
    fn abs_x(self) -> Self;
    fn floor_x(self) -> Self;
    fn ceil_x(self) -> Self;
    fn round_x(self) -> Self;
    fn sqrt_x(self) -> Self;
    fn exp_x(self) -> Self;
    fn ln_x(self) -> Self;
    fn cos_x(self) -> Self;
    fn sin_x(self) -> Self;
    fn sin_cos_x(self) -> (Self, Self);
    fn atan_x(self) -> Self;
    fn atan2_x(self, other: Self) -> Self;
    fn powf_x(self, e: Self) -> Self;
    fn cosh_x(self) -> Self;
    fn sinh_x(self) -> Self;
    /// Integer power by binary exponentiation (exact operation count).
    fn powi_x(self, n: i32) -> Self;
}

#[cfg(feature = "std")]
impl FloatExt for f64 {
    #[inline]
    fn abs_x(self) -> f64 {
        self.abs()
    }
    #[inline]
    fn floor_x(self) -> f64 {
        self.floor()
    }
    #[inline]
    fn ceil_x(self) -> f64 {
        self.ceil()
    }
    #[inline]
    fn round_x(self) -> f64 {
        self.round()
    }
    #[inline]
    fn sqrt_x(self) -> f64 {
        self.sqrt()
    }
    #[inline]
    fn exp_x(self) -> f64 {
        self.exp()
    }
    #[inline]
    fn ln_x(self) -> f64 {
        self.ln()
    }
    #[inline]
    fn cos_x(self) -> f64 {
        self.cos()
    }
    #[inline]
    fn sin_x(self) -> f64 {
        self.sin()
    }
    #[inline]
    fn sin_cos_x(self) -> (f64, f64) {
        self.sin_cos()
    }
    #[inline]
    fn atan_x(self) -> f64 {
        self.atan()
    }
    #[inline]
    fn atan2_x(self, other: f64) -> f64 {
        self.atan2(other)
    }
    #[inline]
    fn powf_x(self, e: f64) -> f64 {
        self.powf(e)
    }
    #[inline]
    fn cosh_x(self) -> f64 {
        self.cosh()
    }
    #[inline]
    fn sinh_x(self) -> f64 {
        self.sinh()
    }
    #[inline]
    fn powi_x(self, n: i32) -> f64 {
        self.powi(n)
    }
}

#[cfg(not(feature = "std"))]
impl FloatExt for f64 {
    #[inline]
    fn abs_x(self) -> f64 {
        libm::fabs(self)
    }
    #[inline]
    fn floor_x(self) -> f64 {
        libm::floor(self)
    }
    #[inline]
    fn ceil_x(self) -> f64 {
        libm::ceil(self)
    }
    #[inline]
    fn round_x(self) -> f64 {
        libm::round(self)
    }
    #[inline]
    fn sqrt_x(self) -> f64 {
        libm::sqrt(self)
    }
    #[inline]
    fn exp_x(self) -> f64 {
        libm::exp(self)
    }
    #[inline]
    fn ln_x(self) -> f64 {
        libm::log(self)
    }
    #[inline]
    fn cos_x(self) -> f64 {
        libm::cos(self)
    }
    #[inline]
    fn sin_x(self) -> f64 {
        libm::sin(self)
    }
    #[inline]
    fn sin_cos_x(self) -> (f64, f64) {
        libm::sincos(self)
    }
    #[inline]
    fn atan_x(self) -> f64 {
        libm::atan(self)
    }
    #[inline]
    fn atan2_x(self, other: f64) -> f64 {
        libm::atan2(self, other)
    }
    #[inline]
    fn powf_x(self, e: f64) -> f64 {
        libm::pow(self, e)
    }
    #[inline]
    fn cosh_x(self) -> f64 {
        libm::cosh(self)
    }
    #[inline]
    fn sinh_x(self) -> f64 {
        libm::sinh(self)
    }
    #[inline]
    fn powi_x(self, n: i32) -> f64 {
        let mut base = if n < 0 { 1.0 / self } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = 1.0;
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base *= base;
            e >>= 1;
        }
        acc
    }
}

/// Complementary error function (libm on every build).
#[inline]
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// Standard normal CDF.
#[inline]
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / core::f64::consts::SQRT_2)
}

/// `e^{i x}` as a complex number.
#[inline]
pub fn cis(x: f64) -> Complex64 {
    let (s, c) = x.sin_cos_x();
    Complex64::new(c, s)
}

/// Complex exponential without requiring the `std` feature of num-complex.
#[inline]
pub fn cexp(z: Complex64) -> Complex64 {
    let r = z.re.exp_x();
    let (s, c) = z.im.sin_cos_x();
    Complex64::new(r * c, r * s)
}

/// Complex cosine, used when differentiating along contours.
#[inline]
pub fn ccos(z: Complex64) -> Complex64 {
    // cos(a+ib) = cos a cosh b - i sin a sinh b
    let (sa, ca) = z.re.sin_cos_x();
    Complex64::new(ca * z.im.cosh_x(), -sa * z.im.sinh_x())
}

/// Integer power of a complex number by binary exponentiation.
#[inline]
pub fn cpowi(z: Complex64, n: u32) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    let mut base = z;
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        base *= base;
        e >>= 1;
    }
    acc
}

/// Pairwise (cascade) summation: the result depends only on the order of
/// `xs`, never on how work was split across threads.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 32 {
        let mut s = 0.0;
        for &x in xs {
            s += x;
        }
        return s;
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Pairwise summation for complex samples.
pub fn pairwise_sum_complex(xs: &[Complex64]) -> Complex64 {
    if xs.len() <= 32 {
        let mut s = Complex64::new(0.0, 0.0);
        for &x in xs {
            s += x;
        }
        return s;
    }
    let mid = xs.len() / 2;
    pairwise_sum_complex(&xs[..mid]) + pairwise_sum_complex(&xs[mid..])
}

/// Map a `u64` to a double in `[0, 1)` using the top 53 bits.
#[inline]
pub fn u64_to_unit(x: u64) -> f64 {
    (x >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    fm: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let h = b - a;
    let left = h / 12.0 * (fa + 4.0 * flm + fm);
    let right = h / 12.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs_x() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1)
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute
/// tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(&f, a, fa, b, fb, fm, whole, tol, 48)
}

/// Map `0..n` through `f`, in parallel when the `parallel` feature is
/// on. Output order is by index either way, so downstream pairwise
/// reductions are bit-stable regardless of worker count.
pub(crate) fn par_map_indexed<T, F>(n: usize, f: F) -> alloc::vec::Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn normal_cdf_reference_points() {
        assert_relative_eq!(normal_cdf(0.0), 0.5, epsilon = 1e-15);
        assert_relative_eq!(normal_cdf(1.0), 0.8413447460685429, epsilon = 1e-12);
        assert_relative_eq!(normal_cdf(-1.96), 0.024997895148220435, epsilon = 1e-12);
    }

    #[test]
    fn pairwise_matches_naive() {
        let xs: alloc::vec::Vec<f64> = (0..1000).map(|i| (i as f64).sin_x()).collect();
        let naive: f64 = xs.iter().sum();
        assert_relative_eq!(pairwise_sum(&xs), naive, epsilon = 1e-9);
    }

    #[test]
    fn adaptive_simpson_known_integrals() {
        let v = adaptive_simpson(|x| x.sin_x(), 0.0, core::f64::consts::PI, 1e-12);
        assert_relative_eq!(v, 2.0, epsilon = 1e-10);
        let v = adaptive_simpson(|x| (-x * x).exp_x(), -8.0, 8.0, 1e-12);
        assert_relative_eq!(v, core::f64::consts::PI.sqrt_x(), epsilon = 1e-10);
    }

    #[test]
    fn complex_helpers() {
        let z = cexp(Complex64::new(0.3, 1.2));
        let w = Complex64::new(0.3f64.exp_x() * 1.2f64.cos_x(), 0.3f64.exp_x() * 1.2f64.sin_x());
        assert_relative_eq!(z.re, w.re, epsilon = 1e-15);
        assert_relative_eq!(z.im, w.im, epsilon = 1e-15);
        let c = ccos(Complex64::new(0.5, -0.7));
        assert_relative_eq!(c.re, 0.5f64.cos_x() * 0.7f64.cosh_x(), epsilon = 1e-15);
        let p = cpowi(Complex64::new(0.9, 0.1), 5);
        let mut q = Complex64::new(1.0, 0.0);
        for _ in 0..5 {
            q *= Complex64::new(0.9, 0.1);
        }
        assert_relative_eq!(p.re, q.re, epsilon = 1e-14);
        assert_relative_eq!(p.im, q.im, epsilon = 1e-14);
    }
}
