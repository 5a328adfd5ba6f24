//! Small dense matrices over any [`FieldElem`], with exact rank and nullspace.
//!
//! Sizes here are tiny (at most 16x16 scalars, or spans of a few dozen basis
//! matrices flattened to vectors), so plain Gaussian elimination with exact
//! pivots is the right tool.

use crate::scalar::{FieldElem, Scalar};
use num_complex::Complex64;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, PartialEq, Debug)]
pub struct Mat<T> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<T>,
}

impl<T: FieldElem> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for k in 0..n {
            m[(k, k)] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        assert!(rows.iter().all(|x| x.len() == c));
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn scale(&self, s: &T) -> Self {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.clone() * s.clone()).collect(),
        }
    }

    pub fn column(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Mat<T>) {
        for r in 0..b.rows {
            for c in 0..b.cols {
                self[(r0 + r, c0 + c)] = b[(r, c)].clone();
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Mat<T> {
        Mat::from_fn(rows, cols, |r, c| self[(r0 + r, c0 + c)].clone())
    }

    /// Flatten row-major into a vector (for span computations).
    pub fn flatten(&self) -> Vec<T> {
        self.data.clone()
    }

    /// Rank by Gaussian elimination with exact arithmetic.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        let mut row = 0;
        for col in 0..m.cols {
            // find pivot
            let mut piv = None;
            for r in row..m.rows {
                if !m[(r, col)].is_zero() {
                    piv = Some(r);
                    break;
                }
            }
            let Some(p) = piv else { continue };
            m.swap_rows(row, p);
            let pv = m[(row, col)].clone();
            for r in (row + 1)..m.rows {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let f = m[(r, col)].clone() / pv.clone();
                for c in col..m.cols {
                    let v = m[(r, c)].clone() - f.clone() * m[(row, c)].clone();
                    m[(r, c)] = v;
                }
            }
            rank += 1;
            row += 1;
            if row == m.rows {
                break;
            }
        }
        rank
    }

    /// Basis of the right nullspace, exact.
    pub fn nullspace(&self) -> Vec<Vec<T>> {
        let mut m = self.clone();
        let rows = m.rows;
        let cols = m.cols;
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut row = 0;
        for col in 0..cols {
            let mut piv = None;
            for r in row..rows {
                if !m[(r, col)].is_zero() {
                    piv = Some(r);
                    break;
                }
            }
            let Some(p) = piv else { continue };
            m.swap_rows(row, p);
            let pv = m[(row, col)].clone();
            for c in col..cols {
                let v = m[(row, c)].clone() / pv.clone();
                m[(row, c)] = v;
            }
            for r in 0..rows {
                if r != row && !m[(r, col)].is_zero() {
                    let f = m[(r, col)].clone();
                    for c in col..cols {
                        let v = m[(r, c)].clone() - f.clone() * m[(row, c)].clone();
                        m[(r, c)] = v;
                    }
                }
            }
            pivots.push((row, col));
            row += 1;
            if row == rows {
                break;
            }
        }
        let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
        let mut basis = Vec::new();
        for free in 0..cols {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut v = vec![T::zero(); cols];
            v[free] = T::one();
            for &(pr, pc) in &pivots {
                v[pc] = -m[(pr, free)].clone();
            }
            basis.push(v);
        }
        basis
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Inverse by Gauss-Jordan; None when singular. Exact on the exact backend.
    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let mut piv = None;
            for r in col..n {
                if !m[(r, col)].is_zero() {
                    piv = Some(r);
                    break;
                }
            }
            let p = piv?;
            m.swap_rows(col, p);
            inv.swap_rows(col, p);
            let pv = m[(col, col)].clone();
            for c in 0..n {
                let v = m[(col, c)].clone() / pv.clone();
                m[(col, c)] = v;
                let w = inv[(col, c)].clone() / pv.clone();
                inv[(col, c)] = w;
            }
            for r in 0..n {
                if r != col && !m[(r, col)].is_zero() {
                    let f = m[(r, col)].clone();
                    for c in 0..n {
                        let v = m[(r, c)].clone() - f.clone() * m[(col, c)].clone();
                        m[(r, c)] = v;
                        let w = inv[(r, c)].clone() - f.clone() * inv[(col, c)].clone();
                        inv[(r, c)] = w;
                    }
                }
            }
        }
        Some(inv)
    }
}

impl<S: Scalar> Mat<S> {
    pub fn to_c64(&self) -> Mat<Complex64> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.to_c64()).collect(),
        }
    }
}

/// Rank of the span of a family of equal-shaped matrices, viewed as vectors.
pub fn span_rank<T: FieldElem>(mats: &[Mat<T>]) -> usize {
    if mats.is_empty() {
        return 0;
    }
    let cols = mats[0].rows * mats[0].cols;
    let stacked = Mat {
        rows: mats.len(),
        cols,
        data: mats.iter().flat_map(|m| m.flatten()).collect(),
    };
    stacked.rank()
}

/// Exact equality of spans of two families of equal-shaped matrices.
pub fn spans_equal<T: FieldElem>(a: &[Mat<T>], b: &[Mat<T>]) -> bool {
    let ra = span_rank(a);
    let rb = span_rank(b);
    if ra != rb {
        return false;
    }
    let mut both: Vec<Mat<T>> = a.to_vec();
    both.extend_from_slice(b);
    span_rank(&both) == ra
}

/// True when `m` lies in the span of `basis`.
pub fn in_span<T: FieldElem>(m: &Mat<T>, basis: &[Mat<T>]) -> bool {
    let r = span_rank(basis);
    let mut ext = basis.to_vec();
    ext.push(m.clone());
    span_rank(&ext) == r
}

impl<T: FieldElem> std::ops::Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (r, c): (usize, usize)) -> &T {
        &self.data[r * self.cols + c]
    }
}

impl<T: FieldElem> std::ops::IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        &mut self.data[r * self.cols + c]
    }
}

impl<T: FieldElem> Add for Mat<T> {
    type Output = Self;
    fn add(self, r: Self) -> Self {
        assert_eq!((self.rows, self.cols), (r.rows, r.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .into_iter()
                .zip(r.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl<T: FieldElem> Sub for Mat<T> {
    type Output = Self;
    fn sub(self, r: Self) -> Self {
        assert_eq!((self.rows, self.cols), (r.rows, r.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .into_iter()
                .zip(r.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl<T: FieldElem> Neg for Mat<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.into_iter().map(|a| -a).collect(),
        }
    }
}

impl<T: FieldElem> Mul for Mat<T> {
    type Output = Self;
    fn mul(self, r: Self) -> Self {
        &self * &r
    }
}

impl<T: FieldElem> Mul for &Mat<T> {
    type Output = Mat<T>;
    fn mul(self, r: Self) -> Mat<T> {
        assert_eq!(self.cols, r.rows, "matrix dimension mismatch");
        let mut out = Mat::<T>::zeros(self.rows, r.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)].clone();
                if a.is_zero() {
                    continue;
                }
                for j in 0..r.cols {
                    let v = out[(i, j)].clone() + a.clone() * r[(k, j)].clone();
                    out[(i, j)] = v;
                }
            }
        }
        out
    }
}

impl<T: FieldElem> fmt::Display for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(r, c)])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussRational;

    fn g(n: i64) -> GaussRational {
        GaussRational::from_int(n)
    }

    #[test]
    fn rank_and_nullspace() {
        let m = Mat::from_rows(vec![
            vec![g(1), g(2), g(3)],
            vec![g(2), g(4), g(6)],
            vec![g(0), g(1), g(1)],
        ]);
        assert_eq!(m.rank(), 2);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        // check M v = 0
        let v = &ns[0];
        for r in 0..3 {
            let mut acc = GaussRational::from_int(0);
            for c in 0..3 {
                acc = acc + m[(r, c)].clone() * v[c].clone();
            }
            assert!(acc.is_zero());
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let m = Mat::from_rows(vec![
            vec![g(2), g(1)],
            vec![GaussRational::i(), g(3)],
        ]);
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, Mat::identity(2));
    }

    #[test]
    fn span_comparison() {
        let a = Mat::from_rows(vec![vec![g(1), g(0)]]);
        let b = Mat::from_rows(vec![vec![g(0), g(1)]]);
        let c = Mat::from_rows(vec![vec![g(1), g(1)]]);
        assert!(spans_equal(&[a.clone(), b.clone()], &[a.clone(), c.clone()]));
        assert!(!spans_equal(std::slice::from_ref(&a), std::slice::from_ref(&b)));
        assert!(in_span(&c, &[a, b]));
    }
}
