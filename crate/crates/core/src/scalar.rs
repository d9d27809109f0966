//! Complex scalar abstraction for the evaluation layer.
//!
//! All symbolic data is exact; rounding happens only at evaluation time,
//! either in complex f64 or in complex double-double (~32 significant
//! digits) for the high-precision mode. Double-double arithmetic follows
//! the usual error-free transformations (two_sum / FMA two_prod).

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;

pub trait Scalar:
    Copy
    + Clone
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_f64(x: f64) -> Self;
    fn from_c64(z: Complex64) -> Self;
    fn to_c64(self) -> Complex64;
    /// Modulus as f64; used for pivoting and thresholds only.
    fn norm(self) -> f64;
    fn conj(self) -> Self;
    fn inv(self) -> Self;
    fn sqrt(self) -> Self;
    fn is_finite(self) -> bool;
    /// Working precision of the representation.
    fn epsilon() -> f64;

    fn scale(self, s: f64) -> Self {
        self * Self::from_f64(s)
    }

    /// Integer power by repeated squaring; negative exponents invert.
    fn powi(self, e: i32) -> Self {
        if e < 0 {
            return self.powi(-e).inv();
        }
        let mut base = self;
        let mut exp = e as u32;
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            exp >>= 1;
        }
        acc
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn from_c64(z: Complex64) -> Self {
        z
    }
    fn to_c64(self) -> Complex64 {
        self
    }
    fn norm(self) -> f64 {
        num_complex::Complex::norm(self)
    }
    fn conj(self) -> Self {
        num_complex::Complex::conj(&self)
    }
    fn inv(self) -> Self {
        num_complex::Complex::inv(&self)
    }
    fn sqrt(self) -> Self {
        num_complex::Complex::sqrt(self)
    }
    fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    fn epsilon() -> f64 {
        f64::EPSILON
    }
}

/// Double-double real: an unevaluated sum hi + lo with |lo| <= ulp(hi)/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = f64::mul_add(a, b, -p);
    (p, err)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, other: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, other.hi);
        let (t1, t2) = two_sum(self.lo, other.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, other: Dd) -> Dd {
        self + (-other)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, other: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, other.hi);
        let p2 = p2 + self.hi * other.lo + self.lo * other.hi;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, other: Dd) -> Dd {
        let q1 = self.hi / other.hi;
        let r = self - other * Dd::from_f64(q1);
        let q2 = r.hi / other.hi;
        let r = r - other * Dd::from_f64(q2);
        let q3 = r.hi / other.hi;
        let (s, e) = quick_two_sum(q1, q2);
        let (hi, lo) = quick_two_sum(s, e + q3);
        Dd { hi, lo }
    }
}

/// Complex double-double.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cdd {
    pub re: Dd,
    pub im: Dd,
}

impl Add for Cdd {
    type Output = Cdd;
    fn add(self, o: Cdd) -> Cdd {
        Cdd {
            re: self.re + o.re,
            im: self.im + o.im,
        }
    }
}

impl Sub for Cdd {
    type Output = Cdd;
    fn sub(self, o: Cdd) -> Cdd {
        Cdd {
            re: self.re - o.re,
            im: self.im - o.im,
        }
    }
}

impl Mul for Cdd {
    type Output = Cdd;
    fn mul(self, o: Cdd) -> Cdd {
        Cdd {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }
}

impl Div for Cdd {
    type Output = Cdd;
    // division through the conjugate: (a b~) / |b|^2
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Cdd) -> Cdd {
        let denom = o.re * o.re + o.im * o.im;
        let num = self * o.conj();
        Cdd {
            re: num.re / denom,
            im: num.im / denom,
        }
    }
}

impl Neg for Cdd {
    type Output = Cdd;
    fn neg(self) -> Cdd {
        Cdd {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Scalar for Cdd {
    fn zero() -> Self {
        Cdd {
            re: Dd::ZERO,
            im: Dd::ZERO,
        }
    }
    fn one() -> Self {
        Cdd {
            re: Dd::ONE,
            im: Dd::ZERO,
        }
    }
    fn from_f64(x: f64) -> Self {
        Cdd {
            re: Dd::from_f64(x),
            im: Dd::ZERO,
        }
    }
    fn from_c64(z: Complex64) -> Self {
        Cdd {
            re: Dd::from_f64(z.re),
            im: Dd::from_f64(z.im),
        }
    }
    fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
    fn norm(self) -> f64 {
        let nsq = self.re * self.re + self.im * self.im;
        nsq.to_f64().sqrt()
    }
    fn conj(self) -> Self {
        Cdd {
            re: self.re,
            im: -self.im,
        }
    }
    fn inv(self) -> Self {
        Cdd::one() / self
    }
    /// Newton iteration on z^2 = w from the f64 seed; exact at zero.
    fn sqrt(self) -> Self {
        if self.re.hi == 0.0 && self.im.hi == 0.0 {
            return Cdd::zero();
        }
        let seed = num_complex::Complex::sqrt(self.to_c64());
        let mut z = Cdd::from_c64(seed);
        let half = Cdd::from_f64(0.5);
        for _ in 0..3 {
            z = (z + self / z) * half;
        }
        z
    }
    fn is_finite(self) -> bool {
        self.re.hi.is_finite() && self.im.hi.is_finite()
    }
    fn epsilon() -> f64 {
        // 2^-104: the double-double unit roundoff
        4.93e-32
    }
}

/// Exact rational coefficient brought into the scalar domain. Numerator
/// and denominator convert exactly whenever they fit in f64's 53-bit
/// mantissa, which covers every coefficient this crate produces.
pub fn from_ratio<S: Scalar>(r: &BigRational) -> S {
    let numer = r.numer().to_f64().unwrap_or(f64::NAN);
    let denom = r.denom().to_f64().unwrap_or(f64::NAN);
    S::from_f64(numer) / S::from_f64(denom)
}

/// Relative closeness with an absolute floor: |x - y| <= tol * max(|x|, |y|, floor).
pub fn rel_close_c64(x: Complex64, y: Complex64, tol: f64, floor: f64) -> bool {
    let scale = x.norm().max(y.norm()).max(floor);
    (x - y).norm() <= tol * scale
}

/// Relative error against the max magnitude with an absolute floor.
pub fn rel_err_c64(x: Complex64, y: Complex64, floor: f64) -> f64 {
    let scale = x.norm().max(y.norm()).max(floor);
    (x - y).norm() / scale
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dd(x: f64) -> Dd {
        Dd::from_f64(x)
    }

    #[test]
    fn dd_addition_keeps_tiny_tails() {
        let a = dd(1.0);
        let b = dd(1e-25);
        let s = a + b;
        let back = s - a;
        assert_eq!(back.to_f64(), 1e-25);
    }

    #[test]
    fn dd_product_is_error_free_for_f64_inputs() {
        let a = dd(1.0 + 2f64.powi(-30));
        let b = dd(1.0 - 2f64.powi(-30));
        // (1+e)(1-e) = 1 - e^2 exactly representable in double-double
        let p = a * b;
        let expect_lo = -(2f64.powi(-60));
        assert_eq!(p.hi, 1.0);
        assert_eq!(p.lo, expect_lo);
    }

    #[test]
    fn dd_division_accuracy() {
        let x = dd(1.0) / dd(3.0);
        let back = x * dd(3.0) - dd(1.0);
        assert!(back.to_f64().abs() < 1e-31);
    }

    #[test]
    fn cdd_matches_c64_at_double_precision() {
        let a64 = Complex64::new(0.7, -1.3);
        let b64 = Complex64::new(-2.1, 0.4);
        let a = Cdd::from_c64(a64);
        let b = Cdd::from_c64(b64);
        for (got, want) in [
            ((a + b).to_c64(), a64 + b64),
            ((a * b).to_c64(), a64 * b64),
            ((a / b).to_c64(), a64 / b64),
        ] {
            assert!((got - want).norm() < 1e-14);
        }
    }

    #[test]
    fn cdd_powers_and_roots() {
        let z = Cdd::from_c64(Complex64::new(0.6, 0.8));
        let p = z.powi(5) * z.powi(-5);
        assert!((p - Cdd::one()).norm() < 1e-30);
        let r = z.sqrt();
        assert!((r * r - z).norm() < 1e-30);
        assert_eq!(Cdd::zero().sqrt(), Cdd::zero());
    }

    #[test]
    fn cdd_resolves_below_f64_epsilon() {
        // (1 + 1e-20)^2 - 1 = 2e-20 + 1e-40; invisible to f64
        let one_eps = Cdd::one() + Cdd::from_f64(1e-20);
        let delta = one_eps * one_eps - Cdd::one();
        let got = delta.re.to_f64();
        assert!((got - 2e-20).abs() < 1e-33);
    }

    #[test]
    fn ratio_conversion_exact_for_small_fractions() {
        use num_bigint::BigInt;
        let r = BigRational::new(BigInt::from(-7), BigInt::from(4));
        let x: Complex64 = from_ratio(&r);
        assert_eq!(x, Complex64::new(-1.75, 0.0));
        let y: Cdd = from_ratio(&r);
        assert_eq!(y.to_c64(), Complex64::new(-1.75, 0.0));
    }

    #[test]
    fn powi_matches_num_complex() {
        let z = Complex64::new(1.1, -0.3);
        let via_trait = Scalar::powi(z, -7);
        let direct = z.powi(-7);
        assert!((via_trait - direct).norm() < 1e-12);
    }
}
