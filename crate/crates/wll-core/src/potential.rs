//! Nilpotent normalized potentials eta = lambda^{-1} (0, B1; -B1^t I_{1,3}, 0) dz
//! with rational-function entries over Q(i).
//!
//! A potential is assembled from m-2 column pairs, each of one of two shapes:
//!
//!   kind i:  columns (a, a, b, ib)^t          (independent a, b per column)
//!   kind ii: pair    (v, iv)                  (v free)
//!
//! and must satisfy the isotropy conditions v_j^t I_{1,3} v_l = 0 for all
//! columns, checked exactly. The type tag is 1 + (number of kind-ii pairs).

use crate::errors::CoreError;
use crate::mat::Mat;
use crate::minkowski::MetricSignature;
use crate::poly::Poly;
use crate::quad::integrate_polyline;
use crate::ratfun::RatFun;
use crate::scalar::{FieldElem, GaussRational, Scalar};
use num_complex::Complex64;
use rand::Rng;
use serde_json::{json, Value};

pub type RF = RatFun<GaussRational>;
pub type RFMat = Mat<RF>;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PairKind {
    I,
    II,
}

/// Generators of one 4x2 column pair (columns 2j-5, 2j-4 of B1 for pair j).
#[derive(Clone, Debug)]
pub enum ColumnPair {
    /// ((h1, h1hat), (h1, h1hat), (h3, h3hat), (i h3, i h3hat))
    KindI { h1: RF, h1hat: RF, h3: RF, h3hat: RF },
    /// (v, i v) with v = (h1, h2, h3, h4)^t
    KindII { h1: RF, h2: RF, h3: RF, h4: RF },
}

impl ColumnPair {
    pub fn kind(&self) -> PairKind {
        match self {
            ColumnPair::KindI { .. } => PairKind::I,
            ColumnPair::KindII { .. } => PairKind::II,
        }
    }

    /// The realized 4x2 matrix (v_j, v_j_hat).
    pub fn realize(&self) -> RFMat {
        let i = RF::i();
        match self {
            ColumnPair::KindI { h1, h1hat, h3, h3hat } => Mat::from_rows(vec![
                vec![h1.clone(), h1hat.clone()],
                vec![h1.clone(), h1hat.clone()],
                vec![h3.clone(), h3hat.clone()],
                vec![i.clone() * h3.clone(), i * h3hat.clone()],
            ]),
            ColumnPair::KindII { h1, h2, h3, h4 } => Mat::from_rows(vec![
                vec![h1.clone(), i.clone() * h1.clone()],
                vec![h2.clone(), i.clone() * h2.clone()],
                vec![h3.clone(), i.clone() * h3.clone()],
                vec![h4.clone(), i * h4.clone()],
            ]),
        }
    }
}

/// A validated normalized potential.
#[derive(Clone, Debug)]
pub struct NormalizedPotential {
    pub m: usize,
    pub pairs: Vec<ColumnPair>,
    /// 4 x (2m-4) realized matrix.
    pub b1: RFMat,
    /// 1 + number of kind-ii pairs; None for raw matrices whose pairs do not
    /// match either template.
    pub type_tag: Option<usize>,
    /// Case label attached by the named builders.
    pub case_label: Option<String>,
    /// Numeric locations of denominator roots, for grid avoidance.
    pub poles: Vec<Complex64>,
}

fn i13_rf() -> RFMat {
    let sig: Mat<GaussRational> = MetricSignature::lorentz(4).matrix();
    Mat::from_fn(4, 4, |r, c| RF::constant(sig[(r, c)].clone()))
}

fn pair_name(col: usize) -> String {
    // column index (0-based in B1) -> "v_j" / "v_j^" with j in 3..m
    let j = col / 2 + 3;
    if col.is_multiple_of(2) {
        format!("v_{j}")
    } else {
        format!("v^_{j}")
    }
}

/// Exact isotropy check B1^t I_{1,3} B1 = 0; on failure reports the column
/// pair (as pair indices j, l in 3..m) and the offending rational function.
pub fn validate_isotropy(b1: &RFMat) -> Result<(), CoreError> {
    let gram = &(&b1.transpose() * &i13_rf()) * b1;
    for a in 0..gram.rows {
        for b in 0..gram.cols {
            if !gram[(a, b)].is_zero() {
                return Err(CoreError::Isotropy {
                    j: a / 2 + 3,
                    l: b / 2 + 3,
                    value: format!(
                        "{}^t I_{{1,3}} {} = {}",
                        pair_name(a),
                        pair_name(b),
                        gram[(a, b)]
                    ),
                });
            }
        }
    }
    Ok(())
}

/// Numeric roots of every nonconstant denominator appearing in the matrix.
fn pole_set(b1: &RFMat) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = Vec::new();
    for f in &b1.data {
        if f.den.degree().unwrap_or(0) == 0 {
            continue;
        }
        for r in durand_kerner(&f.den) {
            if !out.iter().any(|p| (p - r).norm() < 1e-8) {
                out.push(r);
            }
        }
    }
    out
}

/// All complex roots of an exact polynomial, numerically (Durand-Kerner).
pub fn durand_kerner(p: &Poly<GaussRational>) -> Vec<Complex64> {
    let deg = match p.degree() {
        Some(d) if d >= 1 => d,
        _ => return vec![],
    };
    let lead = p.leading().unwrap().to_c64();
    let coeffs: Vec<Complex64> = p.coeffs.iter().map(|c| c.to_c64() / lead).collect();
    let eval = |z: Complex64| {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    };
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..deg).map(|k| seed.powu(k as u32 + 1)).collect();
    for _ in 0..200 {
        let mut delta: f64 = 0.0;
        for i in 0..deg {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..deg {
                if i != j {
                    denom *= roots[i] - roots[j];
                }
            }
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-13 {
            break;
        }
    }
    roots
}

/// Assemble and validate a potential from column pairs.
pub fn assemble(pairs: Vec<ColumnPair>) -> Result<NormalizedPotential, CoreError> {
    if pairs.is_empty() {
        return Err(CoreError::Dimension(
            "a potential needs at least one column pair (m >= 3)".into(),
        ));
    }
    let m = pairs.len() + 2;
    let mut b1: RFMat = Mat::zeros(4, 2 * m - 4);
    for (k, p) in pairs.iter().enumerate() {
        b1.set_block(0, 2 * k, &p.realize());
    }
    validate_isotropy(&b1)?;
    let kind_ii = pairs.iter().filter(|p| p.kind() == PairKind::II).count();
    let poles = pole_set(&b1);
    Ok(NormalizedPotential {
        m,
        pairs,
        type_tag: Some(1 + kind_ii),
        case_label: None,
        poles,
        b1,
    })
}

/// Wrap a raw 4x(2m-4) matrix, detecting pair kinds where possible.
pub fn from_matrix(b1: RFMat) -> Result<NormalizedPotential, CoreError> {
    if b1.rows != 4 || b1.cols < 2 || !b1.cols.is_multiple_of(2) {
        return Err(CoreError::Dimension(format!(
            "B1 must be 4 x (2m-4), got {}x{}",
            b1.rows, b1.cols
        )));
    }
    validate_isotropy(&b1)?;
    let m = b1.cols / 2 + 2;
    let mut kinds = Vec::new();
    for k in 0..(m - 2) {
        kinds.push(detect_pair_kind(&b1.block(0, 2 * k, 4, 2)));
    }
    let type_tag = if kinds.iter().all(|k| k.is_some()) {
        Some(1 + kinds.iter().filter(|k| **k == Some(PairKind::II)).count())
    } else {
        None
    };
    let poles = pole_set(&b1);
    Ok(NormalizedPotential {
        m,
        pairs: vec![],
        type_tag,
        case_label: None,
        poles,
        b1,
    })
}

/// Shape detection for a raw 4x2 pair, up to the sign conjugations of
/// O(1,3) x O(n) that preserve the templates (row sign flips), with kind ii
/// taking precedence on overlap.
pub fn detect_pair_kind(pair: &RFMat) -> Option<PairKind> {
    let v: Vec<RF> = pair.column(0);
    let vh: Vec<RF> = pair.column(1);
    let i = RF::i();
    let nonzero = v.iter().any(|f| !f.is_zero()) || vh.iter().any(|f| !f.is_zero());
    if !nonzero {
        return Some(PairKind::I); // zero pair fits the degenerate kind-i template
    }
    for sign in [RF::one(), -RF::one()] {
        let ok = v
            .iter()
            .zip(&vh)
            .all(|(a, b)| (b.clone() - sign.clone() * i.clone() * a.clone()).is_zero());
        if ok {
            return Some(PairKind::II);
        }
    }
    // kind i pattern: row1 = e*row0, row3 = d*i*row2 with signs e, d
    for e in [RF::one(), -RF::one()] {
        for d in [RF::one(), -RF::one()] {
            let rows_ok = |c: &[RF]| {
                (c[1].clone() - e.clone() * c[0].clone()).is_zero()
                    && (c[3].clone() - d.clone() * i.clone() * c[2].clone()).is_zero()
            };
            if rows_ok(&v) && rows_ok(&vh) {
                return Some(PairKind::I);
            }
        }
    }
    None
}

/// The isotropic column-vector normal form: for meromorphic h1, h2,
/// v1 = (1 + h1 h2, -1 + h1 h2, h1 + h2, -i(h1 - h2))^t and
/// v2 = (h1, h1, 1, i)^t satisfy v^t I_{1,3} v = v1^t I_{1,3} v2 = 0
/// identically.
pub fn isotropic_pair_from_functions(h1: &RF, h2: &RF) -> ([RF; 4], [RF; 4]) {
    let one = RF::one();
    let i = RF::i();
    let v1 = [
        one.clone() + h1.clone() * h2.clone(),
        -one.clone() + h1.clone() * h2.clone(),
        h1.clone() + h2.clone(),
        -(i.clone() * (h1.clone() - h2.clone())),
    ];
    let v2 = [h1.clone(), h1.clone(), one, i];
    (v1, v2)
}

fn col_scale(v: &[RF; 4], f: &RF) -> [RF; 4] {
    [
        v[0].clone() * f.clone(),
        v[1].clone() * f.clone(),
        v[2].clone() * f.clone(),
        v[3].clone() * f.clone(),
    ]
}

fn col_add(a: &[RF; 4], b: &[RF; 4]) -> [RF; 4] {
    [
        a[0].clone() + b[0].clone(),
        a[1].clone() + b[1].clone(),
        a[2].clone() + b[2].clone(),
        a[3].clone() + b[3].clone(),
    ]
}

/// Kind-ii pair from an explicit column.
fn kind_ii_from_column(v: &[RF; 4]) -> ColumnPair {
    ColumnPair::KindII {
        h1: v[0].clone(),
        h2: v[1].clone(),
        h3: v[2].clone(),
        h4: v[3].clone(),
    }
}

/// Kind-i pair from two explicit kind-i shaped columns (a,a,b,ib).
fn kind_i_from_columns(v: &[RF; 4], vh: &[RF; 4]) -> ColumnPair {
    ColumnPair::KindI {
        h1: v[0].clone(),
        h1hat: vh[0].clone(),
        h3: v[2].clone(),
        h3hat: vh[2].clone(),
    }
}

/// Sphere-valued target cases for m = 4.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum S6Case {
    /// Minimal-surface type: B1 = (v1, h20 v1, h30 v1, h40 v1) with the
    /// kind-i column v1 = (h13, h13, h33, i h33)^t, h33 nonconstant.
    Case1,
    /// Neither S-Willmore nor isotropic:
    /// B1 = (h10 v1, i h10 v1, h30hat v2, h40hat v2).
    Case2,
    /// Totally isotropic: B1 = (h10 v1, i h10 v1, w, i w) with
    /// w = h30 v1 + h40 v2.
    Case3,
}

pub struct S6Inputs {
    pub case: S6Case,
    /// Case 1 uses (h13, h33, h20, h30, h40); cases 2 and 3 use (h10, a, b,
    /// h1, h2) with (a, b) = (h30hat, h40hat) or (h30, h40).
    pub fns: Vec<RF>,
}

pub fn s6_case_builder(inp: &S6Inputs) -> Result<NormalizedPotential, CoreError> {
    let f = &inp.fns;
    let label;
    let pairs = match inp.case {
        S6Case::Case1 => {
            let [h13, h33, h20, h30, h40]: &[RF; 5] = f
                .as_slice()
                .try_into()
                .map_err(|_| CoreError::Degenerate("case 1 needs 5 functions".into()))?;
            if h33.derivative().is_zero() {
                return Err(CoreError::Degenerate(
                    "case 1 requires |h33'|^2 not identically zero".into(),
                ));
            }
            let v1 = [
                h13.clone(),
                h13.clone(),
                h33.clone(),
                RF::i() * h33.clone(),
            ];
            label = "s6_case1";
            vec![
                kind_i_from_columns(&v1, &col_scale(&v1, h20)),
                kind_i_from_columns(&col_scale(&v1, h30), &col_scale(&v1, h40)),
            ]
        }
        S6Case::Case2 => {
            let [h10, h30hat, h40hat, h1, h2]: &[RF; 5] = f
                .as_slice()
                .try_into()
                .map_err(|_| CoreError::Degenerate("case 2 needs 5 functions".into()))?;
            if h1.derivative().is_zero() && h2.derivative().is_zero() {
                return Err(CoreError::Degenerate(
                    "case 2 requires |h1'|^2 + |h2'|^2 not identically zero".into(),
                ));
            }
            let iso_sq = h30hat.clone() * h30hat.clone() + h40hat.clone() * h40hat.clone();
            if iso_sq.is_zero() {
                return Err(CoreError::Degenerate(
                    "case 2 requires h30hat^2 + h40hat^2 not identically zero \
                     (h40hat = +-i h30hat overlaps the totally isotropic case)"
                        .into(),
                ));
            }
            let (v1, v2) = isotropic_pair_from_functions(h1, h2);
            label = "s6_case2";
            vec![
                kind_ii_from_column(&col_scale(&v1, h10)),
                kind_i_from_columns(&col_scale(&v2, h30hat), &col_scale(&v2, h40hat)),
            ]
        }
        S6Case::Case3 => {
            let [h10, h30, h40, h1, h2]: &[RF; 5] = f
                .as_slice()
                .try_into()
                .map_err(|_| CoreError::Degenerate("case 3 needs 5 functions".into()))?;
            if h1.derivative().is_zero() {
                return Err(CoreError::Degenerate(
                    "case 3 requires |h1'|^2 not identically zero".into(),
                ));
            }
            if h30.is_zero() && h40.is_zero() {
                return Err(CoreError::Degenerate(
                    "case 3 requires |h30|^2 + |h40|^2 not identically zero".into(),
                ));
            }
            let (v1, v2) = isotropic_pair_from_functions(h1, h2);
            let w = col_add(&col_scale(&v1, h30), &col_scale(&v2, h40));
            label = "s6_case3";
            vec![
                kind_ii_from_column(&col_scale(&v1, h10)),
                kind_ii_from_column(&w),
            ]
        }
    };
    let mut p = assemble(pairs)?;
    p.case_label = Some(label.into());
    Ok(p)
}

/// Potential of a non-S-Willmore Willmore two-sphere in S^5: fourth column
/// zero, B1 = (h0 v1, i h0 v1, h0hat v2, 0). All inputs nonconstant.
pub fn s5_builder(h0: &RF, h1: &RF, h2: &RF, h0hat: &RF) -> Result<NormalizedPotential, CoreError> {
    for (name, f) in [("h0", h0), ("h1", h1), ("h2", h2), ("h0hat", h0hat)] {
        if f.is_constant() {
            return Err(CoreError::Degenerate(format!(
                "s5 builder requires nonconstant {name}"
            )));
        }
    }
    let (v1, v2) = isotropic_pair_from_functions(h1, h2);
    let zero = [RF::zero(), RF::zero(), RF::zero(), RF::zero()];
    let mut p = assemble(vec![
        kind_ii_from_column(&col_scale(&v1, h0)),
        kind_i_from_columns(&col_scale(&v2, h0hat), &zero),
    ])?;
    p.case_label = Some("s5".into());
    Ok(p)
}

/// Potentials of Willmore two-spheres in S^4 (m = 3, one pair). Both cases
/// have rank one.
pub fn s4_case_builder(
    case: u8,
    h10: &RF,
    h20_or_unused: &RF,
    h1: &RF,
    h2: &RF,
) -> Result<NormalizedPotential, CoreError> {
    let mut p = match case {
        1 => {
            if h1.is_zero() && h2.is_zero() {
                return Err(CoreError::Degenerate(
                    "s4 case 1 requires |h1|^2 + |h2|^2 not identically zero".into(),
                ));
            }
            // kind-i column (h1, h1, h2, i h2)
            let v1 = [h1.clone(), h1.clone(), h2.clone(), RF::i() * h2.clone()];
            assemble(vec![kind_i_from_columns(
                &col_scale(&v1, h10),
                &col_scale(&v1, h20_or_unused),
            )])?
        }
        2 => {
            let (v1, _) = isotropic_pair_from_functions(h1, h2);
            assemble(vec![kind_ii_from_column(&col_scale(&v1, h10))])?
        }
        _ => return Err(CoreError::Degenerate("s4 case must be 1 or 2".into())),
    };
    p.case_label = Some(format!("s4_case{case}"));
    Ok(p)
}

/// General mixed-shape potential: pairs 3..l of kind ii with columns
/// a_j v1 + b_j v2, pairs l+1..m of kind i proportional to v2 (coefficients
/// c_j, d_j). Covers every type tag from 2 (l = 3) to m-1 (l = m).
pub fn mixed_shape_potential(
    m: usize,
    l: usize,
    h1: &RF,
    h2: &RF,
    ii_coeffs: &[(RF, RF)],
    i_coeffs: &[(RF, RF)],
) -> Result<NormalizedPotential, CoreError> {
    if !(3..=m).contains(&l) || ii_coeffs.len() != l - 2 || i_coeffs.len() != m - l {
        return Err(CoreError::Dimension(format!(
            "mixed shape needs 3 <= l <= m and coefficient lists of lengths l-2, m-l; \
             got m={m}, l={l}, {} kind-ii and {} kind-i entries",
            ii_coeffs.len(),
            i_coeffs.len()
        )));
    }
    let (v1, v2) = isotropic_pair_from_functions(h1, h2);
    let mut pairs = Vec::new();
    for (a, b) in ii_coeffs {
        let w = col_add(&col_scale(&v1, a), &col_scale(&v2, b));
        pairs.push(kind_ii_from_column(&w));
    }
    for (c, d) in i_coeffs {
        pairs.push(kind_i_from_columns(&col_scale(&v2, c), &col_scale(&v2, d)));
    }
    assemble(pairs)
}

/// Rank of B1 over the rational-function field; the S-Willmore predicate is
/// rank == 1.
pub fn generic_rank(p: &NormalizedPotential) -> usize {
    p.b1.rank()
}

pub fn is_s_willmore(p: &NormalizedPotential) -> bool {
    generic_rank(p) == 1
}

/// eta_{-1} = (0, B1; -B1^t I_{1,3}, 0) as a (2m)x(2m) rational matrix.
pub fn eta_minus_one(p: &NormalizedPotential) -> RFMat {
    let m = p.m;
    let mut eta: RFMat = Mat::zeros(2 * m, 2 * m);
    eta.set_block(0, 4, &p.b1);
    let lower = -(&p.b1.transpose() * &i13_rf());
    eta.set_block(4, 0, &lower);
    eta
}

/// Membership defect eta^t I_{1,2m-1} + I_{1,2m-1} eta (zero for every B1).
pub fn eta_so_defect(p: &NormalizedPotential) -> RFMat {
    let eta = eta_minus_one(p);
    let sig: Mat<GaussRational> = MetricSignature::lorentz(2 * p.m).matrix();
    let metric: RFMat = Mat::from_fn(2 * p.m, 2 * p.m, |r, c| RF::constant(sig[(r, c)].clone()));
    &eta.transpose() * &metric + &metric * &eta
}

/// eta_{-1} as a polynomial matrix when every entry is polynomial.
pub fn eta_minus_one_poly(p: &NormalizedPotential) -> Option<Mat<Poly<GaussRational>>> {
    let eta = eta_minus_one(p);
    let mut out = Mat::zeros(eta.rows, eta.cols);
    for r in 0..eta.rows {
        for c in 0..eta.cols {
            out[(r, c)] = eta[(r, c)].as_polynomial()?;
        }
    }
    Some(out)
}

/// The explicit totally isotropic potential in S^6 (m = 4, type 3):
/// B1 = 1/2 ((2iz, -2z, -i, 1), (-2iz, 2z, -i, 1),
///           (-2, -2i, -z, -iz), (2i, -2, -iz, z)).
pub fn example_potential() -> NormalizedPotential {
    let z = RF::var();
    let i = RF::i();
    let half = RF::constant(GaussRational::from_ratio(1, 2));
    // first pair: v = (iz, -iz, -1, i), second pair: v = (-i/2, -i/2, -z/2, -iz/2)
    let p3 = ColumnPair::KindII {
        h1: i.clone() * z.clone(),
        h2: -(i.clone() * z.clone()),
        h3: -RF::one(),
        h4: i.clone(),
    };
    let p4 = ColumnPair::KindII {
        h1: -(i.clone() * half.clone()),
        h2: -(i.clone() * half.clone()),
        h3: -(z.clone() * half.clone()),
        h4: -(i * z * half),
    };
    let mut p = assemble(vec![p3, p4]).expect("example potential is isotropic");
    p.case_label = Some("example".into());
    p
}

/// Random rational function with small integer coefficients; degree of the
/// numerator <= max_deg, denominator constant (polynomial) so that iterated
/// integration stays exact.
pub fn random_ratfun<R: Rng>(rng: &mut R, max_deg: usize) -> RF {
    let deg = rng.gen_range(0..=max_deg);
    let coeffs: Vec<GaussRational> = (0..=deg)
        .map(|_| GaussRational::from_ints(rng.gen_range(-3..=3), rng.gen_range(-3..=3)))
        .collect();
    RF::from_poly(Poly::new(coeffs))
}

/// Random potential of the requested type tag (1..=m-1), valid by
/// construction.
pub fn random_potential<R: Rng>(rng: &mut R, m: usize, type_tag: usize) -> NormalizedPotential {
    assert!(m >= 3 && (1..=m - 1).contains(&type_tag));
    if type_tag == 1 {
        let pairs = (0..m - 2)
            .map(|_| ColumnPair::KindI {
                h1: random_ratfun(rng, 2),
                h1hat: random_ratfun(rng, 2),
                h3: random_ratfun(rng, 2),
                h3hat: random_ratfun(rng, 2),
            })
            .collect();
        return assemble(pairs).expect("kind-i potentials are always isotropic");
    }
    let l = type_tag + 1; // pairs 3..l are kind ii
    let h1 = random_ratfun(rng, 2);
    let h2 = random_ratfun(rng, 2);
    let ii: Vec<(RF, RF)> = (0..l - 2)
        .map(|_| (random_ratfun(rng, 1), random_ratfun(rng, 1)))
        .collect();
    let i_: Vec<(RF, RF)> = (0..m - l)
        .map(|_| (random_ratfun(rng, 1), random_ratfun(rng, 1)))
        .collect();
    mixed_shape_potential(m, l, &h1, &h2, &ii, &i_)
        .expect("mixed-shape potentials are isotropic by construction")
}

// ---------------------------------------------------------------------------
// JSON file format
// ---------------------------------------------------------------------------

fn ratfun_to_json(f: &RF) -> Value {
    let ser = |p: &Poly<GaussRational>| -> Value {
        Value::Array(
            p.coeffs
                .iter()
                .map(|c| json!([c.re.to_string(), c.im.to_string()]))
                .collect(),
        )
    };
    json!({ "num": ser(&f.num), "den": ser(&f.den) })
}

fn poly_from_json(v: &Value, what: &str) -> Result<Poly<GaussRational>, CoreError> {
    let arr = v
        .as_array()
        .ok_or_else(|| CoreError::PotentialFormat(format!("{what}: expected coefficient array")))?;
    let mut coeffs = Vec::with_capacity(arr.len());
    for c in arr {
        let pair = c.as_array().filter(|a| a.len() == 2).ok_or_else(|| {
            CoreError::PotentialFormat(format!("{what}: coefficient must be [re, im]"))
        })?;
        let parse = |x: &Value| -> Result<_, CoreError> {
            let s = x
                .as_str()
                .map(|s| s.to_string())
                .or_else(|| x.as_i64().map(|n| n.to_string()))
                .ok_or_else(|| {
                    CoreError::PotentialFormat(format!("{what}: rational must be a string or int"))
                })?;
            GaussRational::rational_from_str(&s).ok_or_else(|| {
                CoreError::PotentialFormat(format!("{what}: cannot parse rational {s:?}"))
            })
        };
        coeffs.push(GaussRational::new(parse(&pair[0])?, parse(&pair[1])?));
    }
    Ok(Poly::new(coeffs))
}

fn ratfun_from_json(v: &Value, what: &str) -> Result<RF, CoreError> {
    let obj = v
        .as_object()
        .ok_or_else(|| CoreError::PotentialFormat(format!("{what}: expected {{num, den}}")))?;
    let num = poly_from_json(
        obj.get("num")
            .ok_or_else(|| CoreError::PotentialFormat(format!("{what}: missing num")))?,
        what,
    )?;
    let den = match obj.get("den") {
        Some(d) => poly_from_json(d, what)?,
        None => Poly::one(),
    };
    if den.is_zero() {
        return Err(CoreError::PotentialFormat(format!(
            "{what}: zero denominator"
        )));
    }
    Ok(RF::new(num, den))
}

pub fn potential_to_json(p: &NormalizedPotential) -> Value {
    let pairs: Vec<Value> = p
        .pairs
        .iter()
        .map(|pair| match pair {
            ColumnPair::KindI { h1, h1hat, h3, h3hat } => json!({
                "kind": "i",
                "functions": {
                    "h1": ratfun_to_json(h1),
                    "h1hat": ratfun_to_json(h1hat),
                    "h3": ratfun_to_json(h3),
                    "h3hat": ratfun_to_json(h3hat),
                }
            }),
            ColumnPair::KindII { h1, h2, h3, h4 } => json!({
                "kind": "ii",
                "functions": {
                    "h1": ratfun_to_json(h1),
                    "h2": ratfun_to_json(h2),
                    "h3": ratfun_to_json(h3),
                    "h4": ratfun_to_json(h4),
                }
            }),
        })
        .collect();
    json!({ "m": p.m, "pairs": pairs })
}

/// Parse a potential file: either explicit pairs
/// `{ "m": int, "pairs": [{ "kind": "i"|"ii", "functions": {...} }] }`
/// or a named builder
/// `{ "builder": "s6_case3", "h10": {...}, ... }` / `{ "builder": "example" }`.
pub fn potential_from_json(v: &Value) -> Result<NormalizedPotential, CoreError> {
    let obj = v
        .as_object()
        .ok_or_else(|| CoreError::PotentialFormat("top level must be an object".into()))?;
    if let Some(b) = obj.get("builder") {
        let name = b
            .as_str()
            .ok_or_else(|| CoreError::PotentialFormat("builder must be a string".into()))?;
        let f = |key: &str| -> Result<RF, CoreError> {
            ratfun_from_json(
                obj.get(key).ok_or_else(|| {
                    CoreError::PotentialFormat(format!("builder {name} needs function {key:?}"))
                })?,
                key,
            )
        };
        return match name {
            "example" => Ok(example_potential()),
            "s6_case1" => s6_case_builder(&S6Inputs {
                case: S6Case::Case1,
                fns: vec![f("h13")?, f("h33")?, f("h20")?, f("h30")?, f("h40")?],
            }),
            "s6_case2" => s6_case_builder(&S6Inputs {
                case: S6Case::Case2,
                fns: vec![f("h10")?, f("h30hat")?, f("h40hat")?, f("h1")?, f("h2")?],
            }),
            "s6_case3" => s6_case_builder(&S6Inputs {
                case: S6Case::Case3,
                fns: vec![f("h10")?, f("h30")?, f("h40")?, f("h1")?, f("h2")?],
            }),
            "s5" => s5_builder(&f("h0")?, &f("h1")?, &f("h2")?, &f("h0hat")?),
            "s4_case1" => s4_case_builder(1, &f("h10")?, &f("h20")?, &f("h1")?, &f("h2")?),
            "s4_case2" => s4_case_builder(2, &f("h10")?, &RF::zero(), &f("h1")?, &f("h2")?),
            other => Err(CoreError::PotentialFormat(format!(
                "unknown builder {other:?}"
            ))),
        };
    }
    let m = obj
        .get("m")
        .and_then(|x| x.as_u64())
        .ok_or_else(|| CoreError::PotentialFormat("missing integer field m".into()))? as usize;
    let pairs_json = obj
        .get("pairs")
        .and_then(|x| x.as_array())
        .ok_or_else(|| CoreError::PotentialFormat("missing pairs array".into()))?;
    if pairs_json.len() != m - 2 {
        return Err(CoreError::PotentialFormat(format!(
            "m = {m} needs {} pairs, file has {}",
            m - 2,
            pairs_json.len()
        )));
    }
    let mut pairs = Vec::new();
    for (k, pj) in pairs_json.iter().enumerate() {
        let pobj = pj
            .as_object()
            .ok_or_else(|| CoreError::PotentialFormat(format!("pair {k}: expected object")))?;
        let kind = pobj
            .get("kind")
            .and_then(|x| x.as_str())
            .ok_or_else(|| CoreError::PotentialFormat(format!("pair {k}: missing kind")))?;
        let fns = pobj
            .get("functions")
            .and_then(|x| x.as_object())
            .ok_or_else(|| CoreError::PotentialFormat(format!("pair {k}: missing functions")))?;
        let get = |key: &str| -> Result<RF, CoreError> {
            match fns.get(key) {
                Some(v) => ratfun_from_json(v, &format!("pair {k} {key}")),
                None => Err(CoreError::PotentialFormat(format!(
                    "pair {k}: kind {kind} needs function {key:?}"
                ))),
            }
        };
        pairs.push(match kind {
            "i" => ColumnPair::KindI {
                h1: get("h1")?,
                h1hat: get("h1hat")?,
                h3: get("h3")?,
                h3hat: get("h3hat")?,
            },
            "ii" => ColumnPair::KindII {
                h1: get("h1")?,
                h2: get("h2")?,
                h3: get("h3")?,
                h4: get("h4")?,
            },
            other => {
                return Err(CoreError::PotentialFormat(format!(
                    "pair {k}: kind must be \"i\" or \"ii\", got {other:?}"
                )))
            }
        });
    }
    assemble(pairs)
}

// ---------------------------------------------------------------------------
// Torus-chart period diagnostics
// ---------------------------------------------------------------------------

/// Period residuals of the six antiderivative integrals attached to the
/// torus-type potentials: h1, h2, h1 h0, h2 h0 directly, and the two nested
/// combinations. Antiderivative values are taken along straight rays from
/// `base`; the report lists the loop integrals along the two generators.
pub struct TorusPeriodReport {
    /// (name, period along gamma1, period along gamma2)
    pub periods: Vec<(String, Complex64, Complex64)>,
    pub max_abs: f64,
}

pub fn torus_integral_check(
    h0: &dyn Fn(Complex64) -> Complex64,
    h1: &dyn Fn(Complex64) -> Complex64,
    h2: &dyn Fn(Complex64) -> Complex64,
    base: Complex64,
    gamma1: &[Complex64],
    gamma2: &[Complex64],
    n_quad: usize,
) -> TorusPeriodReport {
    let anti = |f: &dyn Fn(Complex64) -> Complex64, z: Complex64| -> Complex64 {
        let mut g = |w: Complex64| f(w);
        integrate_polyline(&mut g, &[base, z], n_quad)
    };
    let h10 = |z: Complex64| h1(z) * h0(z);
    let h20 = |z: Complex64| h2(z) * h0(z);
    // integrands of the six quantities
    type Integrand<'a> = Box<dyn Fn(Complex64) -> Complex64 + 'a>;
    let integrands: Vec<(String, Integrand)> = vec![
        ("h1".into(), Box::new(h1)),
        ("h2".into(), Box::new(h2)),
        ("h1*h0".into(), Box::new(h10)),
        ("h2*h0".into(), Box::new(h20)),
        (
            "h31".into(),
            Box::new(move |z| -anti(&h10, z) * h2(z) + anti(&|w| h1(w), z) * h2(z) * h0(z)),
        ),
        (
            "h32".into(),
            Box::new(move |z| -anti(&|w| h2(w), z) * h1(z) * h0(z) + anti(&h20, z) * h1(z)),
        ),
    ];
    let mut periods = Vec::new();
    let mut max_abs: f64 = 0.0;
    for (name, f) in &integrands {
        let mut g = |z: Complex64| f(z);
        let p1 = integrate_polyline(&mut g, gamma1, n_quad);
        let mut g = |z: Complex64| f(z);
        let p2 = integrate_polyline(&mut g, gamma2, n_quad);
        max_abs = max_abs.max(p1.norm()).max(p2.norm());
        periods.push((name.clone(), p1, p2));
    }
    TorusPeriodReport { periods, max_abs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::errors::CoreError;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn z() -> RF {
        RF::var()
    }

    #[test]
    fn isotropic_pair_identities() {
        let h1 = z();
        let h2 = z() * z() + RF::i();
        let (v1, v2) = isotropic_pair_from_functions(&h1, &h2);
        let i13 = i13_rf();
        let pair = |a: &[RF; 4], b: &[RF; 4]| -> RF {
            let av = Mat::from_rows(vec![a.to_vec()]);
            let bv = Mat::from_rows(vec![b.to_vec()]);
            (&(&av * &i13) * &bv.transpose())[(0, 0)].clone()
        };
        assert!(pair(&v1, &v1).is_zero());
        assert!(pair(&v2, &v2).is_zero());
        assert!(pair(&v1, &v2).is_zero());
    }

    #[test]
    fn iso_pair_at_zero_functions() {
        let (v1, v2) = isotropic_pair_from_functions(&RF::zero(), &RF::zero());
        assert_eq!(
            v1.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
            ["(1)", "(-1)", "0", "0"]
        );
        assert_eq!(v2[2], RF::one());
        assert_eq!(v2[3], RF::i());
    }

    #[test]
    fn type_one_is_always_isotropic() {
        let mut rng = StdRng::seed_from_u64(7);
        for m in [3usize, 4, 5] {
            let p = random_potential(&mut rng, m, 1);
            assert_eq!(p.type_tag, Some(1));
        }
    }

    #[test]
    fn example_matches_closed_matrix_and_type() {
        let p = example_potential();
        assert_eq!(p.m, 4);
        assert_eq!(p.type_tag, Some(3));
        // spot entries of B1 = 1/2 (...): (0,0) = i z, (2,1) = -i, (3,3) = z/2
        let half = GaussRational::from_ratio(1, 2);
        let iz = RF::i() * z();
        assert_eq!(p.b1[(0, 0)], iz.clone() * RF::constant(half.clone()) * RF::constant(GaussRational::from_int(2)));
        assert_eq!(p.b1[(2, 1)], RF::i() * RF::constant(-GaussRational::from_int(1)));
        assert_eq!(p.b1[(3, 3)], z() * RF::constant(half));
        assert_eq!(generic_rank(&p), 2);
        assert!(!is_s_willmore(&p));
    }

    #[test]
    fn example_from_case3_builder() {
        // h10 = iz, h30 = 0, h40 = -z/2, h1 = i/z, h2 = 0
        let h10 = RF::i() * z();
        let h30 = RF::zero();
        let h40 = -(z() * RF::constant(GaussRational::from_ratio(1, 2)));
        let h1 = RF::new(Poly::constant(GaussRational::i()), Poly::var());
        let h2 = RF::zero();
        let p = s6_case_builder(&S6Inputs {
            case: S6Case::Case3,
            fns: vec![h10, h30, h40, h1, h2],
        })
        .unwrap();
        assert_eq!(p.b1, example_potential().b1);
    }

    #[test]
    fn generic_kind_ii_pairs_are_rejected() {
        // two unrelated kind-ii pairs violate the cross-column conditions;
        // the error names the offending pair
        let p3 = ColumnPair::KindII {
            h1: RF::one(),
            h2: z(),
            h3: RF::zero(),
            h4: RF::one(),
        };
        let p4 = ColumnPair::KindII {
            h1: z(),
            h2: RF::one(),
            h3: RF::i(),
            h4: RF::zero(),
        };
        match assemble(vec![p3, p4]) {
            Err(CoreError::Isotropy { j, l, .. }) => {
                assert!((3..=4).contains(&j) && (3..=4).contains(&l));
            }
            other => panic!("generic kind-ii pairs must fail isotropy: {other:?}"),
        }
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        let b1: RFMat = Mat::zeros(4, 2);
        let p = from_matrix(b1).unwrap();
        assert_eq!(generic_rank(&p), 0);
        assert!(!is_s_willmore(&p));
    }

    #[test]
    fn corrupted_potential_is_rejected_with_pair() {
        let p = example_potential();
        let mut b1 = p.b1.clone();
        b1[(0, 2)] = b1[(0, 2)].clone() + RF::one();
        let err = validate_isotropy(&b1).unwrap_err();
        match err {
            CoreError::Isotropy { j, l, .. } => {
                // column 2 belongs to pair 4
                assert!(j == 4 || l == 4, "offending pair not identified: {j},{l}");
            }
            other => panic!("expected isotropy error, got {other}"),
        }
    }

    #[test]
    fn s5_builder_examples() {
        let h0 = z();
        let h1 = z();
        let h2 = z() * z();
        let h0hat = z();
        let p = s5_builder(&h0, &h1, &h2, &h0hat).unwrap();
        assert_eq!(generic_rank(&p), 2);
        assert_eq!(p.type_tag, Some(2));
        // fourth column identically zero
        for r in 0..4 {
            assert!(p.b1[(r, 3)].is_zero());
        }
        // constant input rejected
        assert!(s5_builder(&h0, &h1, &h2, &RF::zero()).is_err());
        assert!(s5_builder(&RF::one(), &h1, &h2, &h0hat).is_err());
    }

    #[test]
    fn s6_case2_overlap_rejected() {
        let h10 = z();
        let h30hat = z();
        let h40hat = RF::i() * z();
        let h1 = z();
        let h2 = RF::zero();
        let err = s6_case_builder(&S6Inputs {
            case: S6Case::Case2,
            fns: vec![h10, h30hat, h40hat, h1, h2],
        });
        assert!(err.is_err());
    }

    #[test]
    fn s6_case1_rank_one_with_zero_multipliers() {
        let p = s6_case_builder(&S6Inputs {
            case: S6Case::Case1,
            fns: vec![RF::one(), z(), RF::zero(), RF::zero(), RF::zero()],
        })
        .unwrap();
        assert_eq!(generic_rank(&p), 1);
        assert_eq!(p.type_tag, Some(1));
    }

    #[test]
    fn s4_builders_are_rank_one() {
        let p1 = s4_case_builder(1, &z(), &(z() * z()), &z(), &RF::one()).unwrap();
        assert_eq!(p1.m, 3);
        assert_eq!(generic_rank(&p1), 1);
        assert!(is_s_willmore(&p1));
        let p2 = s4_case_builder(2, &z(), &RF::zero(), &z(), &RF::zero()).unwrap();
        assert_eq!(generic_rank(&p2), 1);
        assert!(is_s_willmore(&p2));
    }

    #[test]
    fn eta_shape_and_membership() {
        let p = example_potential();
        assert!(eta_so_defect(&p).is_zero());
        let eta = eta_minus_one(&p);
        for r in 0..8 {
            for c in 0..8 {
                if (r < 4) == (c < 4) {
                    assert!(eta[(r, c)].is_zero(), "eta not p-shaped at ({r},{c})");
                }
            }
        }
    }

    #[test]
    fn kind_detection_stable_under_sign_conjugation() {
        let p = example_potential();
        for k in 0..2 {
            let pair = p.b1.block(0, 2 * k, 4, 2);
            assert_eq!(detect_pair_kind(&pair), Some(PairKind::II));
            // multiply rows by diag(1,-1,-1,-1) (left action of -I_{1,3})
            let flipped = Mat::from_fn(4, 2, |r, c| {
                if r == 0 {
                    pair[(r, c)].clone()
                } else {
                    -pair[(r, c)].clone()
                }
            });
            assert_eq!(detect_pair_kind(&flipped), Some(PairKind::II));
        }
        let mut rng = StdRng::seed_from_u64(3);
        let q = random_potential(&mut rng, 4, 1);
        for k in 0..2 {
            let pair = q.b1.block(0, 2 * k, 4, 2);
            assert_eq!(detect_pair_kind(&pair), Some(PairKind::I));
            let flipped = Mat::from_fn(4, 2, |r, c| {
                if r == 0 {
                    pair[(r, c)].clone()
                } else {
                    -pair[(r, c)].clone()
                }
            });
            assert_eq!(detect_pair_kind(&flipped), Some(PairKind::I));
        }
    }

    #[test]
    fn json_roundtrip() {
        let p = example_potential();
        let j = potential_to_json(&p);
        let q = potential_from_json(&j).unwrap();
        assert_eq!(q.b1, p.b1);
        let builder = serde_json::json!({ "builder": "example" });
        let r = potential_from_json(&builder).unwrap();
        assert_eq!(r.b1, p.b1);
    }

    #[test]
    fn pole_set_of_rational_potential() {
        // kind-i potential with a pole at z = 2
        let den = Poly::new(vec![GaussRational::from_int(-2), GaussRational::from_int(1)]);
        let f = RF::new(Poly::one(), den);
        let p = assemble(vec![ColumnPair::KindI {
            h1: f,
            h1hat: RF::zero(),
            h3: z(),
            h3hat: RF::one(),
        }])
        .unwrap();
        assert_eq!(p.poles.len(), 1);
        assert!((p.poles[0] - Complex64::new(2.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn torus_periods_zero_for_exact_derivatives() {
        // h's that are derivatives of rational functions, loops avoiding poles:
        // every period is a closed loop integral of a rational function with
        // zero residue inside, hence zero.
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let square = [c(2.0, -0.5), c(3.0, -0.5), c(3.0, 0.5), c(2.0, 0.5), c(2.0, -0.5)];
        let square2 = [c(2.0, -0.25), c(2.5, -0.25), c(2.5, 0.25), c(2.0, 0.25), c(2.0, -0.25)];
        // h1 = h2 = (z^2)' = 2z, h0 = (z^3)'/(z^2)' = 3z/2
        let h1 = |w: Complex64| 2.0 * w;
        let h0 = |w: Complex64| 1.5 * w;
        let report = torus_integral_check(&h0, &h1, &h1, c(2.0, 0.0), &square, &square2, 24);
        assert!(report.max_abs < 1e-10, "max period {}", report.max_abs);
        // zero functions trivially give zero periods
        let zf = |_: Complex64| Complex64::new(0.0, 0.0);
        let r0 = torus_integral_check(&zf, &zf, &zf, c(0.0, 0.0), &square, &square2, 8);
        assert!(r0.max_abs == 0.0);
        // a pole inside the loop gives a visible period
        let pole = |w: Complex64| ((w - c(2.3, 0.0)) * (w - c(2.3, 0.0))).inv() * c(0.0, 1.0)
            + (w - c(2.3, 0.0)).inv();
        let r1 = torus_integral_check(&zf, &pole, &zf, c(2.0, 0.0), &square2, &square, 48);
        assert!(r1.max_abs > 1.0, "expected nonzero period, got {}", r1.max_abs);
    }

    #[test]
    fn mixed_shapes_pass_isotropy_for_all_types() {
        let mut rng = StdRng::seed_from_u64(11);
        for m in [3usize, 4, 5] {
            for t in 1..m {
                let p = random_potential(&mut rng, m, t);
                assert_eq!(p.type_tag, Some(t), "type tag at m={m}");
            }
        }
    }
}
