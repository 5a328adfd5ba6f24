//! The complex orthogonal algebra so(1,2m-1,C), its torus, the E/F/H/L
//! basis matrices built from 2x2 blocks, brackets, and ad-eigenspace gradings.
//!
//! Membership is the exact identity `A^t I_{1,2m-1} + I_{1,2m-1} A = 0`.
//! Gradings are computed by exact linear algebra over Q(i) on a fixed ambient
//! basis (the elementary antisymmetrized matrices adapted to the metric), so
//! eigenvalues i*j with integer j are recognized without thresholds.

use crate::errors::CoreError;
use crate::mat::Mat;
use crate::minkowski::MetricSignature;
use crate::scalar::{FieldElem, GaussRational, Scalar};
use std::collections::BTreeMap;

pub type ExactMat = Mat<GaussRational>;

/// so-membership defect A^t I + I A; zero iff A is in the algebra.
pub fn so_defect<S: Scalar>(a: &Mat<S>) -> Mat<S> {
    assert_eq!(a.rows, a.cols);
    let metric: Mat<S> = MetricSignature::lorentz(a.rows).matrix();
    &a.transpose() * &metric + &metric * a
}

pub fn is_in_so<S: Scalar>(a: &Mat<S>) -> bool {
    so_defect(a).is_zero()
}

/// Commutator AB - BA.
pub fn bracket<S: Scalar>(a: &Mat<S>, b: &Mat<S>) -> Result<Mat<S>, CoreError> {
    if a.rows != b.rows || a.cols != b.cols {
        return Err(CoreError::Dimension(format!(
            "bracket of {}x{} with {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    Ok(a * b - b * a)
}

/// The four 2x2 block templates for the first-row family (r = 1) and the
/// generic family (2 <= r < j). Partner blocks are forced by membership:
/// c_{j1} = -c_{1j}^t I_{1,1} and c_{jr} = -c_{rj}^t.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BasisKind {
    E,
    F,
    H,
    L,
}

impl BasisKind {
    pub const ALL: [BasisKind; 4] = [BasisKind::E, BasisKind::F, BasisKind::H, BasisKind::L];

    fn template<S: Scalar>(self, first_row: bool) -> Mat<S> {
        let one = S::one();
        let i = S::i();
        let rows: [[S; 2]; 2] = if first_row {
            match self {
                BasisKind::E => [[one.clone(), i.clone()], [one, i]],
                BasisKind::F => [[one.clone(), i.clone()], [-one, -i]],
                BasisKind::H => [[one.clone(), -i.clone()], [one, -i]],
                BasisKind::L => [[one.clone(), -i.clone()], [-one, i]],
            }
        } else {
            match self {
                BasisKind::E => [[one.clone(), i.clone()], [i, -one]],
                BasisKind::F => [[one.clone(), i.clone()], [-i, one]],
                BasisKind::H => [[one.clone(), -i.clone()], [i, one]],
                BasisKind::L => [[one.clone(), -i.clone()], [-i, -one]],
            }
        };
        Mat::from_rows(rows.into_iter().map(|r| r.to_vec()).collect())
    }
}

/// Basis matrix E/F/H/L_{rj} of so(2m,C), nonzero only in the (r,j) and (j,r)
/// 2x2 blocks, 1 <= r < j <= m.
pub fn basis_element<S: Scalar>(
    kind: BasisKind,
    r: usize,
    j: usize,
    m: usize,
) -> Result<Mat<S>, CoreError> {
    if !(1 <= r && r < j && j <= m) {
        return Err(CoreError::IndexRange(format!(
            "basis element needs 1 <= r < j <= m, got r={r}, j={j}, m={m}"
        )));
    }
    let c_rj: Mat<S> = kind.template(r == 1);
    let c_jr = if r == 1 {
        // c_{j1} = -c_{1j}^t I_{1,1}
        let i11: Mat<S> = MetricSignature::lorentz(2).matrix();
        -(&c_rj.transpose() * &i11)
    } else {
        -c_rj.transpose()
    };
    let mut out = Mat::zeros(2 * m, 2 * m);
    out.set_block(2 * (r - 1), 2 * (j - 1), &c_rj);
    out.set_block(2 * (j - 1), 2 * (r - 1), &c_jr);
    Ok(out)
}

/// Torus element: block-diagonal with
/// a_1 = ((0, i a11), (i a11, 0)) and a_j = ((0, a_jj), (-a_jj, 0)) for j >= 2.
#[derive(Clone, PartialEq, Debug)]
pub struct TorusElement {
    pub m: usize,
    pub coeffs: Vec<i64>,
}

impl TorusElement {
    pub fn new(coeffs: Vec<i64>) -> Result<Self, CoreError> {
        let m = coeffs.len();
        if m < 3 {
            return Err(CoreError::Dimension(format!(
                "torus element needs m >= 3, got m = {m}"
            )));
        }
        Ok(TorusElement { m, coeffs })
    }

    /// Unit element xi_hat_l (coefficient delta_{jl}).
    pub fn xi_hat(l: usize, m: usize) -> Self {
        assert!(1 <= l && l <= m);
        let mut coeffs = vec![0i64; m];
        coeffs[l - 1] = 1;
        TorusElement { m, coeffs }
    }

    pub fn realize<S: Scalar>(&self) -> Mat<S> {
        let mut out = Mat::zeros(2 * self.m, 2 * self.m);
        for (jm1, &a) in self.coeffs.iter().enumerate() {
            let c = S::from_int(a);
            let block = if jm1 == 0 {
                let ia = S::i() * c;
                Mat::from_rows(vec![vec![S::zero(), ia.clone()], vec![ia, S::zero()]])
            } else {
                Mat::from_rows(vec![
                    vec![S::zero(), c.clone()],
                    vec![-c, S::zero()],
                ])
            };
            out.set_block(2 * jm1, 2 * jm1, &block);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&a| a == 0)
    }
}

/// Simultaneous ad-eigenspaces of a torus element on so(2m,C):
/// g_j = { X : [xi, X] = i j X }. Grades with trivial eigenspace are absent.
#[derive(Clone, Debug)]
pub struct GradedDecomposition {
    pub m: usize,
    /// Height r(xi): the largest j with a nonzero grade.
    pub height: i64,
    pub parts: BTreeMap<i64, Vec<ExactMat>>,
}

impl GradedDecomposition {
    pub fn total_dim(&self) -> usize {
        self.parts.values().map(|v| v.len()).sum()
    }

    pub fn dim_of(&self, grade: i64) -> usize {
        self.parts.get(&grade).map(|v| v.len()).unwrap_or(0)
    }

    /// Basis of the direct sum of the odd positive-parity part
    /// g_1 + g_3 + g_5 + ...
    pub fn odd_nonneg_part(&self) -> Vec<ExactMat> {
        let mut out = Vec::new();
        let mut j = 1i64;
        while j <= self.height {
            if let Some(b) = self.parts.get(&j) {
                out.extend(b.iter().cloned());
            }
            j += 2;
        }
        out
    }

    /// Basis of the full positive part g_1 + g_2 + ...
    pub fn positive_part(&self) -> Vec<ExactMat> {
        self.parts
            .iter()
            .filter(|(&j, _)| j > 0)
            .flat_map(|(_, b)| b.iter().cloned())
            .collect()
    }
}

/// Ambient basis of so(2m,C): the m(2m-1) elementary antisymmetrized matrices
/// M_{pq} = e_pq - I e_qp I (p < q), which solve X^t I + I X = 0 by
/// construction.
pub fn ambient_basis(m: usize) -> Vec<ExactMat> {
    let n = 2 * m;
    let sig = MetricSignature::lorentz(n);
    let mut basis = Vec::with_capacity(m * (2 * m - 1));
    for p in 0..n {
        for q in (p + 1)..n {
            let mut x: ExactMat = Mat::zeros(n, n);
            x[(p, q)] = GaussRational::one();
            let s = GaussRational::from_int(-sig.sign(p) * sig.sign(q));
            x[(q, p)] = s;
            basis.push(x);
        }
    }
    basis
}

/// Exact grading of so(2m,C) by ad(xi) for an integer torus element.
///
/// In the elementary antisymmetrized basis, ad(xi) is block-diagonal: the
/// four basis elements supported on a 2x2-block pair (R,J) span an invariant
/// subspace, and the within-block elements commute with xi. Eigenvalues are
/// i*(+-a_R +- a_J), so each 4x4 restriction is resolved by exact nullspaces
/// of (ad - i j) over Q(i).
pub fn grade(xi: &TorusElement) -> Result<GradedDecomposition, CoreError> {
    let m = xi.m;
    let n = 2 * m;
    let dim = m * (2 * m - 1);
    let xi_mat: ExactMat = xi.realize();
    let mut parts: BTreeMap<i64, Vec<ExactMat>> = BTreeMap::new();
    let mut total = 0usize;

    // Within-block elements all commute with xi: grade 0.
    for blk in 0..m {
        let (p, q) = (2 * blk, 2 * blk + 1);
        let mut x: ExactMat = Mat::zeros(n, n);
        x[(p, q)] = GaussRational::one();
        // adapted sign: +1 inside block 1 (metric -1,+1), -1 elsewhere
        x[(q, p)] = GaussRational::from_int(if blk == 0 { 1 } else { -1 });
        let br = bracket(&xi_mat, &x)?;
        if !br.is_zero() {
            return Err(CoreError::Grading(format!(
                "within-block basis element at block {blk} is not ad-invariant"
            )));
        }
        parts.entry(0).or_default().push(x);
        total += 1;
    }

    // Block pairs (R, J), R < J: four elementary elements, invariant span.
    for rb in 0..m {
        for jb in (rb + 1)..m {
            let mut elems: Vec<ExactMat> = Vec::with_capacity(4);
            for p in [2 * rb, 2 * rb + 1] {
                for q in [2 * jb, 2 * jb + 1] {
                    let mut x: ExactMat = Mat::zeros(n, n);
                    x[(p, q)] = GaussRational::one();
                    let s = if rb == 0 && p == 0 { 1 } else { -1 };
                    x[(q, p)] = GaussRational::from_int(s);
                    elems.push(x);
                }
            }
            // ad(xi) restricted to the 4-dim span, in block-pair coordinates
            let coords = |x: &ExactMat| -> [GaussRational; 4] {
                [
                    x[(2 * rb, 2 * jb)].clone(),
                    x[(2 * rb, 2 * jb + 1)].clone(),
                    x[(2 * rb + 1, 2 * jb)].clone(),
                    x[(2 * rb + 1, 2 * jb + 1)].clone(),
                ]
            };
            let mut ad4: ExactMat = Mat::zeros(4, 4);
            for (col, e) in elems.iter().enumerate() {
                let br = bracket(&xi_mat, e)?;
                // confirm the bracket stays in the span
                let rebuilt = {
                    let c = coords(&br);
                    let mut acc: ExactMat = Mat::zeros(n, n);
                    for (k, e2) in elems.iter().enumerate() {
                        acc = acc + e2.scale(&c[k]);
                    }
                    acc
                };
                if rebuilt != br {
                    return Err(CoreError::Grading(format!(
                        "ad(xi) escapes the block-pair span at ({rb},{jb})"
                    )));
                }
                for (row, c) in coords(&br).into_iter().enumerate() {
                    ad4[(row, col)] = c;
                }
            }
            let a_r = xi.coeffs[rb];
            let a_j = xi.coeffs[jb];
            let mut candidates = vec![a_r + a_j, a_j - a_r, a_r - a_j, -a_r - a_j];
            candidates.sort_unstable();
            candidates.dedup();
            let mut found = 0usize;
            for g in candidates {
                let mut shifted = ad4.clone();
                let ij = GaussRational::i() * GaussRational::from_int(g);
                for k in 0..4 {
                    let v = shifted[(k, k)].clone() - ij.clone();
                    shifted[(k, k)] = v;
                }
                let null = shifted.nullspace();
                for v in null {
                    let mut x: ExactMat = Mat::zeros(n, n);
                    for (k, c) in v.into_iter().enumerate() {
                        if !c.is_zero() {
                            x = x + elems[k].scale(&c);
                        }
                    }
                    parts.entry(g).or_default().push(x);
                    found += 1;
                }
            }
            if found != 4 {
                return Err(CoreError::Grading(format!(
                    "block pair ({rb},{jb}) yields {found} eigenvectors, expected 4"
                )));
            }
            total += 4;
        }
    }

    if total != dim {
        return Err(CoreError::Grading(format!(
            "eigenspaces of ad(xi) span dimension {total}, expected {dim}; \
             non-integer coefficients?"
        )));
    }
    parts.retain(|_, v| !v.is_empty());
    let height = parts.keys().copied().max().unwrap_or(0);
    Ok(GradedDecomposition { m, height, parts })
}

/// Block shape tests for the symmetric-space splitting: k = block-diagonal
/// (4x4 and (2m-4)x(2m-4)), p = off-diagonal.
pub fn has_k_shape<S: Scalar>(x: &Mat<S>) -> bool {
    let n = x.rows;
    for r in 0..n {
        for c in 0..n {
            let off = (r < 4) != (c < 4);
            if off && !x[(r, c)].is_zero() {
                return false;
            }
        }
    }
    true
}

pub fn has_p_shape<S: Scalar>(x: &Mat<S>) -> bool {
    let n = x.rows;
    for r in 0..n {
        for c in 0..n {
            let off = (r < 4) != (c < 4);
            if !off && !x[(r, c)].is_zero() {
                return false;
            }
        }
    }
    true
}

/// True iff every odd grade lies in p^C and every even grade in k^C.
pub fn parity_split_check(g: &GradedDecomposition) -> bool {
    g.parts.iter().all(|(&j, mats)| {
        if j.rem_euclid(2) == 1 {
            mats.iter().all(has_p_shape)
        } else {
            mats.iter().all(has_k_shape)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::in_span;

    fn gr(n: i64) -> GaussRational {
        GaussRational::from_int(n)
    }

    #[test]
    fn all_basis_elements_are_in_so() {
        for m in [3usize, 4, 5] {
            for kind in BasisKind::ALL {
                for r in 1..=m {
                    for j in (r + 1)..=m {
                        let x: ExactMat = basis_element(kind, r, j, m).unwrap();
                        assert!(
                            is_in_so(&x),
                            "membership fails for {:?}_{{{},{}}} m={}",
                            kind,
                            r,
                            j,
                            m
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn paper_block_values() {
        // E_{13} at m=4: block c_13 = ((1,i),(1,i))
        let e: ExactMat = basis_element(BasisKind::E, 1, 3, 4).unwrap();
        let i = GaussRational::i();
        assert_eq!(e[(0, 4)], gr(1));
        assert_eq!(e[(0, 5)], i.clone());
        assert_eq!(e[(1, 4)], gr(1));
        assert_eq!(e[(1, 5)], i.clone());
        // H_{23} at m=4: block c_23 = ((1,-i),(i,1)), c_32 = -c_23^t
        let h: ExactMat = basis_element(BasisKind::H, 2, 3, 4).unwrap();
        assert_eq!(h[(2, 4)], gr(1));
        assert_eq!(h[(2, 5)], -i.clone());
        assert_eq!(h[(3, 4)], i.clone());
        assert_eq!(h[(3, 5)], gr(1));
        assert_eq!(h.block(4, 2, 2, 2), -h.block(2, 4, 2, 2).transpose());
    }

    #[test]
    fn index_range_errors() {
        assert!(basis_element::<GaussRational>(BasisKind::E, 2, 2, 4).is_err());
        assert!(basis_element::<GaussRational>(BasisKind::E, 0, 3, 4).is_err());
        assert!(basis_element::<GaussRational>(BasisKind::E, 1, 5, 4).is_err());
    }

    #[test]
    fn eigen_relations_of_unit_torus() {
        // [xi_r, E_rj] = i E_rj, [xi_r, H_rj] = i H_rj,
        // [xi_r, F_rj] = -i F_rj, [xi_r, L_rj] = -i L_rj  (r < j)
        let m = 4;
        for r in 1..=m {
            let xi: ExactMat = TorusElement::xi_hat(r, m).realize();
            for j in (r + 1)..=m {
                for (kind, sgn) in [
                    (BasisKind::E, 1i64),
                    (BasisKind::H, 1),
                    (BasisKind::F, -1),
                    (BasisKind::L, -1),
                ] {
                    let x: ExactMat = basis_element(kind, r, j, m).unwrap();
                    let br = bracket(&xi, &x).unwrap();
                    let expect = x.scale(&(GaussRational::i() * gr(sgn)));
                    assert_eq!(br, expect, "{:?}_{{{},{}}} under xi_{}", kind, r, j, r);
                }
            }
        }
    }

    #[test]
    fn bracket_with_self_is_zero() {
        let a: ExactMat = basis_element(BasisKind::E, 1, 2, 3).unwrap();
        assert!(bracket(&a, &a).unwrap().is_zero());
    }

    #[test]
    fn unit_torus_grading_matches_stated_spans() {
        // grade(xi_1) at m=4: height 1, g_1 six-dimensional containing
        // E_1j and H_1j for j = 2,3,4.
        let g = grade(&TorusElement::xi_hat(1, 4)).unwrap();
        assert_eq!(g.height, 1);
        assert_eq!(g.dim_of(1), 6);
        assert_eq!(g.dim_of(-1), 6);
        assert_eq!(g.total_dim(), 28);
        let g1 = &g.parts[&1];
        for j in 2..=4 {
            for kind in [BasisKind::E, BasisKind::H] {
                let x: ExactMat = basis_element(kind, 1, j, 4).unwrap();
                assert!(in_span(&x, g1));
            }
        }
    }

    #[test]
    fn sum_of_two_units_has_height_two() {
        let xi = TorusElement::new(vec![1, 1, 0, 0]).unwrap();
        let g = grade(&xi).unwrap();
        assert_eq!(g.height, 2);
        assert_eq!(g.total_dim(), 28);
        // symmetric spectrum
        for (&j, mats) in &g.parts {
            assert_eq!(mats.len(), g.dim_of(-j), "asymmetric grade {}", j);
        }
    }

    #[test]
    fn bracket_grading_compatibility() {
        // [g_a, g_b] subset g_{a+b} on a sample
        let xi = TorusElement::new(vec![1, 1, 0, 0]).unwrap();
        let g = grade(&xi).unwrap();
        for (&a, ma) in &g.parts {
            for (&b, mb) in &g.parts {
                let target = a + b;
                let empty = Vec::new();
                let tb = g.parts.get(&target).unwrap_or(&empty);
                // sample the first basis vector of each part
                let x = &ma[0];
                let y = &mb[0];
                let br = bracket(x, y).unwrap();
                if br.is_zero() {
                    continue;
                }
                assert!(
                    in_span(&br, tb),
                    "[g_{}, g_{}] escapes g_{}",
                    a,
                    b,
                    target
                );
            }
        }
    }
}
