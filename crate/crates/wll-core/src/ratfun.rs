//! Rational functions of one variable over an exact scalar field.
//!
//! Stored fully reduced: gcd(num, den) = 1 and den monic, so equality and the
//! "identically zero" test are exact structural checks.

use crate::poly::Poly;
use crate::scalar::{FieldElem, Scalar};
use num_complex::Complex64;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, PartialEq, Debug)]
pub struct RatFun<S> {
    pub num: Poly<S>,
    pub den: Poly<S>,
}

impl<S: Scalar> RatFun<S> {
    pub fn new(num: Poly<S>, den: Poly<S>) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        RatFun { num, den }.reduce()
    }

    fn reduce(mut self) -> Self {
        if self.num.is_zero() {
            return RatFun {
                num: Poly::zero(),
                den: Poly::one(),
            };
        }
        if S::EXACT {
            let g = self.num.gcd(&self.den);
            if g.degree().unwrap_or(0) > 0 {
                self.num = self.num.div_rem(&g).0;
                self.den = self.den.div_rem(&g).0;
            }
            let lead = self.den.leading().unwrap().clone();
            let inv = S::one() / lead;
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
        }
        self
    }

    pub fn from_poly(p: Poly<S>) -> Self {
        RatFun {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: S) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn var() -> Self {
        Self::from_poly(Poly::var())
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn i() -> Self {
        Self::constant(S::i())
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    /// Numerator as a polynomial when the denominator is constant.
    pub fn as_polynomial(&self) -> Option<Poly<S>> {
        if self.is_polynomial() {
            let d = self.den.coeff(0);
            Some(self.num.scale(&(S::one() / d)))
        } else {
            None
        }
    }

    pub fn derivative(&self) -> Self {
        // (n/d)' = (n'd - nd')/d^2
        let n = self.num.derivative() * self.den.clone()
            - self.num.clone() * self.den.derivative();
        let d = self.den.clone() * self.den.clone();
        RatFun::new(n, d)
    }

    pub fn eval_c64(&self, z: Complex64) -> Complex64 {
        self.num.eval_c64(z) / self.den.eval_c64(z)
    }

    /// Exact evaluation; None at a pole.
    pub fn eval(&self, z: &S) -> Option<S> {
        let d = self.den.eval(z);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(z) / d)
        }
    }

    pub fn conj_coeffs(&self) -> Self {
        RatFun::new(self.num.conj_coeffs(), self.den.conj_coeffs())
    }
}

impl<S: Scalar> FieldElem for RatFun<S> {
    fn zero() -> Self {
        RatFun::zero()
    }
    fn one() -> Self {
        RatFun::one()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl<S: Scalar> Add for RatFun<S> {
    type Output = Self;
    fn add(self, r: Self) -> Self {
        RatFun::new(
            self.num.clone() * r.den.clone() + r.num * self.den.clone(),
            self.den * r.den,
        )
    }
}

impl<S: Scalar> Sub for RatFun<S> {
    type Output = Self;
    fn sub(self, r: Self) -> Self {
        self + (-r)
    }
}

impl<S: Scalar> Neg for RatFun<S> {
    type Output = Self;
    fn neg(self) -> Self {
        RatFun {
            num: -self.num,
            den: self.den,
        }
    }
}

impl<S: Scalar> Mul for RatFun<S> {
    type Output = Self;
    fn mul(self, r: Self) -> Self {
        RatFun::new(self.num * r.num, self.den * r.den)
    }
}

impl<S: Scalar> Div for RatFun<S> {
    type Output = Self;
    fn div(self, r: Self) -> Self {
        assert!(!r.is_zero(), "division by the zero rational function");
        RatFun::new(self.num * r.den, self.den * r.num)
    }
}

impl<S: Scalar> fmt::Display for RatFun<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "[{}] / [{}]", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussRational;

    type R = RatFun<GaussRational>;
    type P = Poly<GaussRational>;

    fn g(n: i64) -> GaussRational {
        GaussRational::from_int(n)
    }

    #[test]
    fn reduction_cancels_common_factors() {
        let zm1 = P::new(vec![g(-1), g(1)]);
        let z = P::var();
        let f = R::new(zm1.clone() * z.clone(), zm1.clone() * zm1.clone());
        assert_eq!(f, R::new(z, zm1));
    }

    #[test]
    fn field_identities() {
        let f = R::new(P::new(vec![g(1), g(2)]), P::new(vec![g(3), g(0), g(1)]));
        let g_ = R::new(P::new(vec![g(0), g(5)]), P::new(vec![g(1), g(1)]));
        let sum = f.clone() + g_.clone();
        assert_eq!(sum - g_.clone(), f);
        let prod = f.clone() * g_.clone();
        assert_eq!(prod / g_, f);
    }

    #[test]
    fn derivative_quotient_rule() {
        // d/dz (z^2 / (z+1)) = (z^2 + 2z)/(z+1)^2
        let f = R::new(P::monomial(g(1), 2), P::new(vec![g(1), g(1)]));
        let expect = R::new(
            P::new(vec![g(0), g(2), g(1)]),
            P::new(vec![g(1), g(2), g(1)]),
        );
        assert_eq!(f.derivative(), expect);
    }
}
