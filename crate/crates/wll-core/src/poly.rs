//! Dense univariate polynomials over a [`Scalar`] backend.

use crate::scalar::{FieldElem, Scalar};
use num_complex::Complex64;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Polynomial in one variable, coefficients in ascending degree order.
/// The zero polynomial is the empty coefficient vector.
#[derive(Clone, PartialEq, Debug)]
pub struct Poly<S> {
    pub coeffs: Vec<S>,
}

impl<S: Scalar> Poly<S> {
    pub fn new(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Poly {
            coeffs: vec![S::one()],
        }
    }

    pub fn constant(c: S) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial `c z^k`.
    pub fn monomial(c: S, k: usize) -> Self {
        let mut coeffs = vec![S::zero(); k + 1];
        coeffs[k] = c;
        Poly::new(coeffs)
    }

    /// The variable `z`.
    pub fn var() -> Self {
        Poly::monomial(S::one(), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, k: usize) -> S {
        self.coeffs.get(k).cloned().unwrap_or_else(S::zero)
    }

    pub fn leading(&self) -> Option<&S> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn scale(&self, c: &S) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .map(|a| a.clone() * c.clone())
                .collect(),
        )
    }

    pub fn eval(&self, z: &S) -> S {
        let mut acc = S::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * z.clone() + c.clone();
        }
        acc
    }

    pub fn eval_c64(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c.to_c64();
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(k, c)| c.clone() * S::from_int(k as i64 + 1))
                .collect(),
        )
    }

    /// Antiderivative with value 0 at z = 0.
    pub fn integral(&self) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![S::zero()];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c.clone() / S::from_int(k as i64 + 1));
        }
        Poly::new(coeffs)
    }

    pub fn conj_coeffs(&self) -> Self {
        Poly::new(self.coeffs.iter().map(|c| c.conj()).collect())
    }

    /// Euclidean division: self = q*div + r with deg r < deg div.
    pub fn div_rem(&self, div: &Self) -> (Self, Self) {
        assert!(!div.is_zero(), "polynomial division by zero");
        let dlead = div.leading().unwrap().clone();
        let ddeg = div.degree().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() < div.coeffs.len() {
            return (Poly::zero(), self.clone());
        }
        let qlen = rem.len() - ddeg;
        let mut q = vec![S::zero(); qlen];
        for k in (0..qlen).rev() {
            let c = rem[k + ddeg].clone() / dlead.clone();
            if c.is_zero() {
                continue;
            }
            for (j, d) in div.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].clone() - c.clone() * d.clone();
            }
            q[k] = c;
        }
        (Poly::new(q), Poly::new(rem))
    }

    /// Monic gcd via the Euclidean algorithm. Meaningful on the exact backend.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone().monic();
        let mut b = other.clone().monic();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a
    }

    pub fn monic(self) -> Self {
        match self.leading() {
            None => self,
            Some(l) => {
                let inv = S::one() / l.clone();
                self.scale(&inv)
            }
        }
    }

    /// Substitute z -> c*z.
    pub fn scale_var(&self, c: &S) -> Self {
        let mut pw = S::one();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            coeffs.push(a.clone() * pw.clone());
            pw = pw * c.clone();
        }
        Poly::new(coeffs)
    }
}

impl<S: Scalar> Add for Poly<S> {
    type Output = Self;
    fn add(self, r: Self) -> Self {
        let n = self.coeffs.len().max(r.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k) + r.coeff(k));
        }
        Poly::new(coeffs)
    }
}

impl<S: Scalar> Sub for Poly<S> {
    type Output = Self;
    fn sub(self, r: Self) -> Self {
        self + (-r)
    }
}

impl<S: Scalar> Neg for Poly<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Poly::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl<S: Scalar> Mul for Poly<S> {
    type Output = Self;
    fn mul(self, r: Self) -> Self {
        if self.is_zero() || r.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![S::zero(); self.coeffs.len() + r.coeffs.len() - 1];
        for (a, ca) in self.coeffs.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (b, cb) in r.coeffs.iter().enumerate() {
                coeffs[a + b] = coeffs[a + b].clone() + ca.clone() * cb.clone();
            }
        }
        Poly::new(coeffs)
    }
}

// Polynomials form a ring; `div` below is exact division and is only valid
// when the remainder vanishes. It exists so matrix machinery can be reused
// for polynomial matrices, which never actually divide.
impl<S: Scalar> Div for Poly<S> {
    type Output = Self;
    fn div(self, r: Self) -> Self {
        let (q, rem) = self.div_rem(&r);
        assert!(rem.is_zero(), "inexact polynomial division");
        q
    }
}

impl<S: Scalar> FieldElem for Poly<S> {
    fn zero() -> Self {
        Poly::zero()
    }
    fn one() -> Self {
        Poly::one()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<S: Scalar> fmt::Display for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussRational;

    type P = Poly<GaussRational>;

    fn g(n: i64) -> GaussRational {
        GaussRational::from_int(n)
    }

    #[test]
    fn div_rem_roundtrip() {
        // (z^3 - 1) / (z - 1) = z^2 + z + 1
        let p = P::new(vec![g(-1), g(0), g(0), g(1)]);
        let d = P::new(vec![g(-1), g(1)]);
        let (q, r) = p.div_rem(&d);
        assert!(r.is_zero());
        assert_eq!(q, P::new(vec![g(1), g(1), g(1)]));
        assert_eq!(q * d, p);
    }

    #[test]
    fn gcd_of_shared_factor() {
        let zm1 = P::new(vec![g(-1), g(1)]);
        let zp2 = P::new(vec![g(2), g(1)]);
        let a = zm1.clone() * zp2.clone();
        let b = zm1.clone() * P::new(vec![g(5), g(3)]);
        assert_eq!(a.gcd(&b), zm1.monic());
    }

    #[test]
    fn derivative_integral_inverse() {
        let p = P::new(vec![g(3), g(2), g(0), g(7)]);
        assert_eq!(p.derivative().integral() + P::constant(g(3)), p);
    }

    #[test]
    fn scale_var_matches_eval() {
        let p = P::new(vec![g(1), g(-2), g(4)]);
        let c = GaussRational::from_ints(2, 1);
        let q = p.scale_var(&c);
        let z = GaussRational::from_ints(3, -2);
        assert_eq!(q.eval(&z), p.eval(&(c * z)));
    }
}
