//! Scalar backends.
//!
//! All classification machinery runs over the exact field Q(i) so that
//! "identically zero" is decidable; the numeric pipeline runs over `Complex64`.
//! Both backends implement [`Scalar`] and generic code (vectors, matrices,
//! polynomials) is written once against it.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Field operations needed by matrices and polynomials.
pub trait FieldElem:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
}

/// A field containing Q(i), with a complex-conjugation and a numeric view.
pub trait Scalar: FieldElem {
    /// The imaginary unit.
    fn i() -> Self;
    fn conj(&self) -> Self;
    fn from_int(n: i64) -> Self;
    /// Exact real rational p/q.
    fn from_ratio(p: i64, q: i64) -> Self;
    /// a + b i from two real rationals.
    fn from_ratio_pair(re: (i64, i64), im: (i64, i64)) -> Self {
        Self::from_ratio(re.0, re.1) + Self::i() * Self::from_ratio(im.0, im.1)
    }
    fn to_c64(&self) -> Complex64;
    /// True for backends where `is_zero` is an exact statement.
    const EXACT: bool;
}

/// Element of Q(i): a Gaussian rational `re + im*i` with arbitrary-precision
/// rational parts.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GaussRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRational { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        GaussRational {
            re: BigRational::from_integer(BigInt::from(re)),
            im: BigRational::from_integer(BigInt::from(im)),
        }
    }

    pub fn norm_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Self {
        let n = self.norm_sq();
        assert!(!n.is_zero(), "division by zero in Q(i)");
        GaussRational {
            re: &self.re / &n,
            im: -&self.im / &n,
        }
    }

    /// Parse "p/q" or "p" as an exact rational.
    pub fn rational_from_str(s: &str) -> Option<BigRational> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(BigRational::new(p, q))
        } else {
            let p: BigInt = s.parse().ok()?;
            Some(BigRational::from_integer(p))
        }
    }
}

impl fmt::Display for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{}{}i", self.re, self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl Add for GaussRational {
    type Output = Self;
    fn add(self, r: Self) -> Self {
        GaussRational {
            re: self.re + r.re,
            im: self.im + r.im,
        }
    }
}

impl Sub for GaussRational {
    type Output = Self;
    fn sub(self, r: Self) -> Self {
        GaussRational {
            re: self.re - r.re,
            im: self.im - r.im,
        }
    }
}

impl Mul for GaussRational {
    type Output = Self;
    fn mul(self, r: Self) -> Self {
        GaussRational {
            re: &self.re * &r.re - &self.im * &r.im,
            im: &self.re * &r.im + &self.im * &r.re,
        }
    }
}

impl Div for GaussRational {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)] // division as product with the inverse
    fn div(self, r: Self) -> Self {
        self * r.inv()
    }
}

impl Neg for GaussRational {
    type Output = Self;
    fn neg(self) -> Self {
        GaussRational {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl FieldElem for GaussRational {
    fn zero() -> Self {
        GaussRational::from_ints(0, 0)
    }
    fn one() -> Self {
        GaussRational::from_ints(1, 0)
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl Scalar for GaussRational {
    fn i() -> Self {
        GaussRational::from_ints(0, 1)
    }
    fn conj(&self) -> Self {
        GaussRational {
            re: self.re.clone(),
            im: -&self.im,
        }
    }
    fn from_int(n: i64) -> Self {
        GaussRational::from_ints(n, 0)
    }
    fn from_ratio(p: i64, q: i64) -> Self {
        assert!(q != 0);
        GaussRational {
            re: BigRational::new(BigInt::from(p), BigInt::from(q)),
            im: BigRational::zero(),
        }
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
    const EXACT: bool = true;
}

impl FieldElem for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
}

impl Scalar for Complex64 {
    fn i() -> Self {
        Complex64::new(0.0, 1.0)
    }
    fn conj(&self) -> Self {
        Complex64::new(self.re, -self.im)
    }
    fn from_int(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn from_ratio(p: i64, q: i64) -> Self {
        Complex64::new(p as f64 / q as f64, 0.0)
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
    const EXACT: bool = false;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_rational_field_ops() {
        let a = GaussRational::from_ints(2, 3);
        let b = GaussRational::from_ints(1, -1);
        let prod = a.clone() * b.clone();
        // (2+3i)(1-i) = 5 + i
        assert_eq!(prod, GaussRational::from_ints(5, 1));
        let back = prod / b;
        assert_eq!(back, a);
        assert_eq!(a.clone() * a.inv(), GaussRational::one());
    }

    #[test]
    fn i_squared_is_minus_one() {
        let i = GaussRational::i();
        assert_eq!(i.clone() * i, GaussRational::from_ints(-1, 0));
    }

    #[test]
    fn parse_rational_strings() {
        assert_eq!(
            GaussRational::rational_from_str("-3/4").unwrap(),
            BigRational::new(BigInt::from(-3), BigInt::from(4))
        );
        assert_eq!(
            GaussRational::rational_from_str("7").unwrap(),
            BigRational::from_integer(BigInt::from(7))
        );
        assert!(GaussRational::rational_from_str("1/0").is_none());
    }
}
