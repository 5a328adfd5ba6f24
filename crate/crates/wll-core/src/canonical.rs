//! Canonical torus elements for SO+(1,2m-1)/SO+(1,3)xSO(2m-4) and their
//! nilpotent subalgebra bases.
//!
//! A canonical element is an integer coefficient vector over the unit torus
//! basis. Sorted decreasingly the coefficients form a staircase (steps 0 or 1)
//! ending at 0, and exactly two of them are odd (exp(pi xi) eigenvalue pattern
//! of D = diag(-I4, I)) or exactly two are even (pattern of -D). The two odd
//! (resp. even) coefficients sit on the distinguished blocks 1 and 2; block 1
//! and block 2 placements are not conjugate, so (3,1,...) and (1,3,...) count
//! separately. Enumeration instantiates the eleven families below and is
//! cross-checked against a brute-force filter over all staircase tuples.

use crate::errors::CoreError;
use crate::lie::{
    basis_element, grade, has_p_shape, BasisKind, ExactMat, GradedDecomposition, TorusElement,
};
use crate::mat::{spans_equal, Mat};
use crate::scalar::{GaussRational, Scalar};
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt;

/// Family of a canonical element. Primed variants carry the larger odd (or
/// nonzero even) coefficient on block 2 instead of block 1.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum FamilyTag {
    A,
    B { l: usize },
    C { l: usize },
    CPrime { l: usize },
    D { l: usize, t: usize },
    DPrime { l: usize, t: usize },
    E,
    F,
    FPrime,
    G { k: usize },
    GPrime { k: usize },
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyTag::A => write!(f, "A"),
            FamilyTag::B { l } => write!(f, "B(l={l})"),
            FamilyTag::C { l } => write!(f, "C(l={l})"),
            FamilyTag::CPrime { l } => write!(f, "C'(l={l})"),
            FamilyTag::D { l, t } => write!(f, "D(l={l},t={t})"),
            FamilyTag::DPrime { l, t } => write!(f, "D'(l={l},t={t})"),
            FamilyTag::E => write!(f, "E"),
            FamilyTag::F => write!(f, "F"),
            FamilyTag::FPrime => write!(f, "F'"),
            FamilyTag::G { k } => write!(f, "G(k={k})"),
            FamilyTag::GPrime { k } => write!(f, "G'(k={k})"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CanonicalElement {
    pub m: usize,
    /// Coefficients (n_1, ..., n_m) over the unit torus basis.
    pub coeffs: Vec<i64>,
    pub family: FamilyTag,
    /// Height r(xi), computed exactly by grading.
    pub height: i64,
}

impl CanonicalElement {
    pub fn torus(&self) -> TorusElement {
        TorusElement::new(self.coeffs.clone()).expect("validated coefficients")
    }

    /// Structural validity: staircase after sorting, parity count, max bound.
    pub fn validate_coeffs(m: usize, coeffs: &[i64]) -> Result<(), CoreError> {
        if coeffs.len() != m {
            return Err(CoreError::Canonical(format!(
                "expected {} coefficients, got {}",
                m,
                coeffs.len()
            )));
        }
        let mut sorted = coeffs.to_vec();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        let bound = (m as i64 - 1).max(4);
        if sorted[0] > bound || *sorted.last().unwrap() != 0 {
            return Err(CoreError::Canonical(format!(
                "sorted coefficients must satisfy {bound} >= n_1 >= ... >= n_m = 0, got {sorted:?}"
            )));
        }
        for w in sorted.windows(2) {
            let step = w[0] - w[1];
            if !(0..=1).contains(&step) {
                return Err(CoreError::Canonical(format!(
                    "steps must be 0 or 1, got {sorted:?}"
                )));
            }
        }
        let odd = coeffs.iter().filter(|&&n| n.rem_euclid(2) == 1).count();
        let even = coeffs.len() - odd;
        if odd != 2 && even != 2 {
            return Err(CoreError::Canonical(format!(
                "need exactly two odd or exactly two even coefficients, got {coeffs:?}"
            )));
        }
        Ok(())
    }
}

fn instantiate(m: usize, family: FamilyTag) -> Vec<i64> {
    let mut n = vec![0i64; m];
    // positions are 1-based in the math, 0-based here
    let fill = |n: &mut Vec<i64>, from: usize, to: usize, v: i64| {
        for j in from..=to {
            n[j - 1] = v;
        }
    };
    match family {
        FamilyTag::A => {
            n[0] = 1;
            n[1] = 1;
        }
        FamilyTag::B { l } => {
            n[0] = 1;
            n[1] = 1;
            fill(&mut n, 3, l, 2);
        }
        FamilyTag::C { l } => {
            n[0] = 3;
            n[1] = 1;
            fill(&mut n, 3, l, 2);
        }
        FamilyTag::CPrime { l } => {
            n[0] = 1;
            n[1] = 3;
            fill(&mut n, 3, l, 2);
        }
        FamilyTag::D { l, t } => {
            n[0] = 3;
            n[1] = 1;
            fill(&mut n, 3, l, 4);
            fill(&mut n, l + 1, t, 2);
        }
        FamilyTag::DPrime { l, t } => {
            n[0] = 1;
            n[1] = 3;
            fill(&mut n, 3, l, 4);
            fill(&mut n, l + 1, t, 2);
        }
        FamilyTag::E => {
            fill(&mut n, 3, m, 1);
        }
        FamilyTag::F => {
            n[0] = 2;
            fill(&mut n, 3, m, 1);
        }
        FamilyTag::FPrime => {
            n[1] = 2;
            fill(&mut n, 3, m, 1);
        }
        FamilyTag::G { k } => {
            n[0] = 2;
            fill(&mut n, 3, k, 3);
            fill(&mut n, k + 1, m, 1);
        }
        FamilyTag::GPrime { k } => {
            n[1] = 2;
            fill(&mut n, 3, k, 3);
            fill(&mut n, k + 1, m, 1);
        }
    }
    n
}

fn all_families(m: usize) -> Vec<FamilyTag> {
    let mut fams = vec![FamilyTag::A];
    for l in 3..=m.saturating_sub(1) {
        fams.push(FamilyTag::B { l });
    }
    for l in 3..=m.saturating_sub(1) {
        fams.push(FamilyTag::C { l });
        fams.push(FamilyTag::CPrime { l });
    }
    for l in 3..m.saturating_sub(1) {
        for t in (l + 1)..=m.saturating_sub(1) {
            fams.push(FamilyTag::D { l, t });
            fams.push(FamilyTag::DPrime { l, t });
        }
    }
    fams.push(FamilyTag::E);
    fams.push(FamilyTag::F);
    fams.push(FamilyTag::FPrime);
    for k in 3..=m.saturating_sub(1) {
        fams.push(FamilyTag::G { k });
        fams.push(FamilyTag::GPrime { k });
    }
    fams
}

/// All canonical elements for a given block count, with exact heights.
/// The list has exactly (m-1)^2 entries, sorted by coefficient vector.
pub fn enumerate_canonical(m: usize) -> Result<Vec<CanonicalElement>, CoreError> {
    if m < 3 {
        return Err(CoreError::Canonical(format!("need m >= 3, got {m}")));
    }
    let mut out = Vec::new();
    for family in all_families(m) {
        let coeffs = instantiate(m, family);
        CanonicalElement::validate_coeffs(m, &coeffs)?;
        let g = grade(&TorusElement::new(coeffs.clone())?)?;
        out.push(CanonicalElement {
            m,
            coeffs,
            family,
            height: g.height,
        });
    }
    out.sort_by(|a, b| a.coeffs.cmp(&b.coeffs));
    let expect = (m - 1) * (m - 1);
    if out.len() != expect {
        return Err(CoreError::Canonical(format!(
            "family instantiation produced {} elements for m={}, expected {}",
            out.len(),
            m,
            expect
        )));
    }
    Ok(out)
}

/// Brute-force oracle: every non-increasing staircase tuple with steps in
/// {0,1}, maximum <= max(m-1,4) and final entry 0 that has exactly two odd
/// (or exactly two even) entries, expanded into block placements: the two
/// distinguished values go to blocks 1 and 2 (both orders when distinct),
/// the rest in non-increasing order on blocks 3..m.
pub fn brute_force_canonical(m: usize) -> Result<Vec<Vec<i64>>, CoreError> {
    if !(3..=10).contains(&m) {
        return Err(CoreError::Canonical(format!(
            "brute force guard allows 3 <= m <= 10, got {m}"
        )));
    }
    let bound = (m as i64 - 1).max(4);
    let mut staircases = vec![vec![0i64]];
    for _ in 1..m {
        let mut next = Vec::new();
        for s in &staircases {
            let top = *s.last().unwrap();
            for step in [0, 1] {
                if top + step <= bound {
                    let mut t = s.clone();
                    t.push(top + step);
                    next.push(t);
                }
            }
        }
        staircases = next;
    }
    let mut found: BTreeSet<Vec<i64>> = BTreeSet::new();
    for s in &staircases {
        let mut tuple: Vec<i64> = s.clone();
        tuple.reverse(); // non-increasing, ends at 0
        let odds: Vec<i64> = tuple.iter().copied().filter(|n| n.rem_euclid(2) == 1).collect();
        let evens: Vec<i64> = tuple.iter().copied().filter(|n| n.rem_euclid(2) == 0).collect();
        let mut emit = |special: &[i64], rest: &[i64]| {
            let mut rest_sorted = rest.to_vec();
            rest_sorted.sort_unstable_by(|a, b| b.cmp(a));
            let mut place = |a: i64, b: i64| {
                let mut v = vec![a, b];
                v.extend_from_slice(&rest_sorted);
                found.insert(v);
            };
            place(special[0], special[1]);
            if special[0] != special[1] {
                place(special[1], special[0]);
            }
        };
        if odds.len() == 2 {
            emit(&odds, &evens);
        }
        if evens.len() == 2 {
            emit(&evens, &odds);
        }
    }
    Ok(found.into_iter().collect())
}

/// Span template for the odd part of a family, as (kind, r, j) index triples.
///
/// These are the closed-form spans of g_1 + g_3 + ... for the coefficient
/// placements used by `instantiate` (larger coefficients first on blocks
/// 3..m); they are asserted against the computed grading, so a transcription
/// slip here is caught as a structural error.
fn span_template_indices(m: usize, family: FamilyTag) -> Vec<(BasisKind, usize, usize)> {
    use BasisKind::{E, F, H};
    let mut idx = Vec::new();
    let range = |kind: BasisKind, r: usize, from: usize, to: usize, idx: &mut Vec<_>| {
        for j in from..=to {
            idx.push((kind, r, j));
        }
    };
    // every family contains all E_rj, r = 1,2, 3 <= j <= m, except A and E
    match family {
        FamilyTag::A => {
            for r in 1..=2 {
                range(E, r, 3, m, &mut idx);
                range(H, r, 3, m, &mut idx);
            }
        }
        FamilyTag::E => {
            for r in 1..=2 {
                range(E, r, 3, m, &mut idx);
                range(F, r, 3, m, &mut idx);
            }
        }
        FamilyTag::B { l } => {
            for r in 1..=2 {
                range(E, r, 3, m, &mut idx);
                range(F, r, 3, l, &mut idx);
                range(H, r, l + 1, m, &mut idx);
            }
        }
        FamilyTag::C { l } => {
            range(E, 1, 3, m, &mut idx);
            range(E, 2, 3, m, &mut idx);
            range(H, 1, 3, m, &mut idx);
            range(F, 2, 3, l, &mut idx);
            range(H, 2, l + 1, m, &mut idx);
        }
        FamilyTag::CPrime { l } => {
            range(E, 1, 3, m, &mut idx);
            range(E, 2, 3, m, &mut idx);
            range(H, 2, 3, m, &mut idx);
            range(F, 1, 3, l, &mut idx);
            range(H, 1, l + 1, m, &mut idx);
        }
        FamilyTag::D { l, t } => {
            range(E, 1, 3, m, &mut idx);
            range(E, 2, 3, m, &mut idx);
            range(F, 1, 3, l, &mut idx);
            range(H, 1, l + 1, m, &mut idx);
            range(F, 2, 3, t, &mut idx);
            range(H, 2, t + 1, m, &mut idx);
        }
        FamilyTag::DPrime { l, t } => {
            range(E, 1, 3, m, &mut idx);
            range(E, 2, 3, m, &mut idx);
            range(F, 2, 3, l, &mut idx);
            range(H, 2, l + 1, m, &mut idx);
            range(F, 1, 3, t, &mut idx);
            range(H, 1, t + 1, m, &mut idx);
        }
        FamilyTag::F => {
            range(E, 1, 3, m, &mut idx);
            range(E, 2, 3, m, &mut idx);
            range(H, 1, 3, m, &mut idx);
            range(F, 2, 3, m, &mut idx);
        }
        FamilyTag::FPrime => {
            range(E, 1, 3, m, &mut idx);
            range(E, 2, 3, m, &mut idx);
            range(H, 2, 3, m, &mut idx);
            range(F, 1, 3, m, &mut idx);
        }
        FamilyTag::G { k } => {
            range(E, 1, 3, m, &mut idx);
            range(E, 2, 3, m, &mut idx);
            range(F, 1, 3, k, &mut idx);
            range(H, 1, k + 1, m, &mut idx);
            range(F, 2, 3, m, &mut idx);
        }
        FamilyTag::GPrime { k } => {
            range(E, 1, 3, m, &mut idx);
            range(E, 2, 3, m, &mut idx);
            range(F, 2, 3, k, &mut idx);
            range(H, 2, k + 1, m, &mut idx);
            range(F, 1, 3, m, &mut idx);
        }
    }
    idx
}

pub fn span_template(m: usize, family: FamilyTag) -> Vec<ExactMat> {
    span_template_indices(m, family)
        .into_iter()
        .map(|(kind, r, j)| basis_element(kind, r, j, m).expect("template indices in range"))
        .collect()
}

/// The odd part of the grading of a canonical element, checked against the
/// family's span template.
#[derive(Clone, Debug)]
pub struct NilpotentBasis {
    pub canonical: CanonicalElement,
    pub odd_part_basis: Vec<ExactMat>,
    pub grading: GradedDecomposition,
}

pub fn nilpotent_basis(xi: &CanonicalElement) -> Result<NilpotentBasis, CoreError> {
    let grading = grade(&xi.torus())?;
    let odd = grading.odd_nonneg_part();
    if !odd.iter().all(has_p_shape) {
        return Err(CoreError::SpanMismatch(format!(
            "{}: odd part escapes the off-diagonal block shape",
            xi.family
        )));
    }
    let template = span_template(xi.m, xi.family);
    if !spans_equal(&odd, &template) {
        return Err(CoreError::SpanMismatch(format!(
            "{}: computed odd part (dim {}) differs from template span (dim {})",
            xi.family,
            odd.len(),
            template.len()
        )));
    }
    Ok(NilpotentBasis {
        canonical: xi.clone(),
        odd_part_basis: odd,
        grading,
    })
}

/// Eigenvalue pattern of exp(pi xi) relative to D = diag(-I4, I_{2m-4}).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ExpPiPattern {
    /// Same eigenvalues as D: exactly two odd coefficients.
    MatchesD,
    /// Same eigenvalues as -D: exactly two even coefficients.
    MatchesMinusD,
    Neither,
}

/// Closed-form exp(pi xi): each 2x2 block contributes (-1)^{n_j} I_2 (the
/// first block with the i-convention included), so the eigenvalue multiset is
/// read off the parities exactly.
pub fn exp_pi_pattern(m: usize, coeffs: &[i64]) -> ExpPiPattern {
    let exp = exp_pi_matrix(m, coeffs);
    let minus_at =
        |k: usize| exp[(k, k)] == GaussRational::from_int(-1);
    // canonical placements give literally D or -D
    if (0..2 * m).all(|k| minus_at(k) == (k < 4)) {
        return ExpPiPattern::MatchesD;
    }
    if (0..2 * m).all(|k| minus_at(k) == (k >= 4)) {
        return ExpPiPattern::MatchesMinusD;
    }
    // conjugated inputs: compare eigenvalue multisets (they coincide at m=4)
    let minus = (0..2 * m).filter(|&k| minus_at(k)).count();
    if minus == 4 {
        ExpPiPattern::MatchesD
    } else if minus == 2 * m - 4 {
        ExpPiPattern::MatchesMinusD
    } else {
        ExpPiPattern::Neither
    }
}

fn exp_pi_matrix(m: usize, coeffs: &[i64]) -> ExactMat {
    // exp(pi n J) with J^2 = -I is cos(pi n) I + sin(pi n) J = (-1)^n I
    // for integer n, for both the rotation blocks and the i-convention block.
    let mut out: ExactMat = Mat::zeros(2 * m, 2 * m);
    for (jm1, &n) in coeffs.iter().enumerate() {
        let s = GaussRational::from_int(if n.rem_euclid(2) == 0 { 1 } else { -1 });
        out[(2 * jm1, 2 * jm1)] = s.clone();
        out[(2 * jm1 + 1, 2 * jm1 + 1)] = s;
    }
    out
}

pub fn exp_pi_check(xi: &CanonicalElement) -> bool {
    exp_pi_pattern(xi.m, &xi.coeffs) != ExpPiPattern::Neither
}
