//! Lorentz-Minkowski linear algebra for R^{1,n+3} and its complexification.
//!
//! The metric is `<x,y> = -x_0 y_0 + sum_j x_j y_j = x^t I_{1,k} y` with
//! `I_{1,k} = diag(-1, 1, ..., 1)`. The inner product is bilinear, never
//! Hermitian: complex inputs use the bilinear extension. The sphere S^{n+2}
//! is modelled as the projectivized forward light cone.

use crate::errors::CoreError;
use crate::mat::Mat;
use crate::scalar::{FieldElem, Scalar};

/// Diagonal metric with `minus` leading -1 entries, `dim` total.
/// Here always `minus = 1` (the sub-blocks I_{1,1}, I_{1,3}, I_{1,2m-1}).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct MetricSignature {
    pub minus: usize,
    pub dim: usize,
}

impl MetricSignature {
    pub fn lorentz(dim: usize) -> Self {
        MetricSignature { minus: 1, dim }
    }

    pub fn matrix<S: Scalar>(&self) -> Mat<S> {
        Mat::from_fn(self.dim, self.dim, |r, c| {
            if r != c {
                S::zero()
            } else if r < self.minus {
                -S::one()
            } else {
                S::one()
            }
        })
    }

    /// Diagonal sign at index k.
    pub fn sign(&self, k: usize) -> i64 {
        if k < self.minus { -1 } else { 1 }
    }
}

/// A vector of R^{1,2m-1} or its complexification; length 2m with 2m >= 6.
#[derive(Clone, PartialEq, Debug)]
pub struct LorentzVector<S> {
    pub entries: Vec<S>,
}

impl<S: Scalar> LorentzVector<S> {
    pub fn new(entries: Vec<S>) -> Result<Self, CoreError> {
        if entries.len() < 6 || !entries.len().is_multiple_of(2) {
            return Err(CoreError::Dimension(format!(
                "Lorentz vector needs even length >= 6, got {}",
                entries.len()
            )));
        }
        Ok(LorentzVector { entries })
    }

    /// Block count m with 2m = n + 4.
    pub fn m(&self) -> usize {
        self.entries.len() / 2
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }
}

/// Bilinear Lorentz pairing x^t I_{1,k} y (no conjugation).
pub fn lorentz_inner<S: Scalar>(
    x: &LorentzVector<S>,
    y: &LorentzVector<S>,
) -> Result<S, CoreError> {
    if x.dim() != y.dim() {
        return Err(CoreError::Dimension(format!(
            "inner product of vectors with lengths {} and {}",
            x.dim(),
            y.dim()
        )));
    }
    Ok(lorentz_inner_slices(&x.entries, &y.entries))
}

/// Same pairing on raw slices; callers guarantee equal lengths.
pub fn lorentz_inner_slices<S: Scalar>(x: &[S], y: &[S]) -> S {
    debug_assert_eq!(x.len(), y.len());
    let mut acc = -(x[0].clone() * y[0].clone());
    for k in 1..x.len() {
        acc = acc + x[k].clone() * y[k].clone();
    }
    acc
}

/// Relative tolerance for numeric lightlike tests; exact backend ignores it.
pub const TAU_LIGHT: f64 = 1e-10;

// The lightlike predicate orders the first coordinate, which the generic
// Scalar does not carry, so the two backends get concrete functions.

/// Forward-lightlike test for a real numeric vector.
pub fn is_forward_lightlike_f64(x: &[f64]) -> bool {
    let mut q = -x[0] * x[0];
    let mut scale = x[0] * x[0];
    for v in &x[1..] {
        q += v * v;
        scale += v * v;
    }
    x[0] > 0.0 && q.abs() <= TAU_LIGHT * scale.max(1.0)
}

/// Forward-lightlike test on the exact backend applied to a rational real
/// vector (all entries must have zero imaginary part).
pub fn is_forward_lightlike_exact(x: &LorentzVector<crate::scalar::GaussRational>) -> bool {
    use num_traits::{Signed, Zero};
    if x.entries.iter().any(|e| !e.im.is_zero()) {
        return false;
    }
    let q = lorentz_inner_slices(&x.entries, &x.entries);
    q.is_zero() && x.entries[0].re.is_positive()
}

/// Projectivize a forward-lightlike vector: (x_1,...,x_{n+3}) / x_0, a
/// Euclidean unit vector representing the point of S^{n+2}.
pub fn projectivize(x: &[f64]) -> Result<Vec<f64>, CoreError> {
    if !is_forward_lightlike_f64(x) {
        return Err(CoreError::NotLightlike(format!(
            "projectivize needs a forward lightlike vector, got x0={} with <x,x> != 0",
            x[0]
        )));
    }
    Ok(x[1..].iter().map(|v| v / x[0]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussRational;

    fn gv(entries: &[i64]) -> LorentzVector<GaussRational> {
        LorentzVector::new(entries.iter().map(|&n| GaussRational::from_int(n)).collect()).unwrap()
    }

    #[test]
    fn inner_product_examples() {
        // lightlike
        let x = gv(&[1, 1, 0, 0, 0, 0, 0, 0]);
        assert!(lorentz_inner(&x, &x).unwrap().is_zero());
        // timelike unit
        let t = gv(&[1, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(lorentz_inner(&t, &t).unwrap(), GaussRational::from_int(-1));
        // direct formula: (2,1,1,0,...) . (1,1,0,...) = -2 + 1 = -1
        let a = gv(&[2, 1, 1, 0, 0, 0, 0, 0]);
        let b = gv(&[1, 1, 0, 0, 0, 0, 0, 0]);
        assert_eq!(lorentz_inner(&a, &b).unwrap(), GaussRational::from_int(-1));
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let a = gv(&[1, 0, 0, 0, 0, 0]);
        let b = gv(&[1, 0, 0, 0, 0, 0, 0, 0]);
        assert!(lorentz_inner(&a, &b).is_err());
    }

    #[test]
    fn metric_squares_to_identity() {
        for dim in [2usize, 4, 8, 12] {
            let sig = MetricSignature::lorentz(dim);
            let m: Mat<GaussRational> = sig.matrix();
            assert_eq!(&m * &m, Mat::identity(dim));
        }
    }

    #[test]
    fn forward_lightlike_cases() {
        assert!(is_forward_lightlike_f64(&[1.0, 1.0, 0.0, 0.0, 0.0, 0.0]));
        assert!(!is_forward_lightlike_f64(&[-1.0, 1.0, 0.0, 0.0, 0.0, 0.0]));
        assert!(!is_forward_lightlike_f64(&[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]));
        assert!(is_forward_lightlike_exact(&gv(&[1, 1, 0, 0, 0, 0, 0, 0])));
        assert!(!is_forward_lightlike_exact(&gv(&[-1, 1, 0, 0, 0, 0, 0, 0])));
    }

    #[test]
    fn projectivize_examples() {
        let y = projectivize(&[1.0, 1.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(y, vec![1.0, 0.0, 0.0, 0.0, 0.0]);
        let y2 = projectivize(&[2.0, 2.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(y2, vec![1.0, 0.0, 0.0, 0.0, 0.0]);
        let s = std::f64::consts::SQRT_2;
        let y3 = projectivize(&[s, 1.0, 1.0, 0.0, 0.0, 0.0]).unwrap();
        let norm: f64 = y3.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() < 1e-12);
        assert!(projectivize(&[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]).is_err());
    }
}
