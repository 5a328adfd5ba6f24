//! Pointwise loop Iwasawa splitting F_- = F F_+^{-1}: find a positive twisted
//! loop F_+ = sum_{k=0..K} B_k lambda^k such that F = F_- F_+ is real on the
//! unit circle and lies in the orthogonal group.
//!
//! The reality conditions coeff(-k) = conj(coeff(k)) of F are homogeneous
//! LINEAR in the B_k, and for F_- in the complexified group the product
//! F^t I F is automatically constant in lambda, equal to B_0^t I B_0. The
//! solver therefore (1) extracts the nullspace of the reality system (whose
//! dimension at interior points equals the 16 + (2m-4)^2 real constants),
//! (2) runs a damped Gauss-Newton inside that nullspace on the single
//! quadratic condition B_0^t I B_0 = I, and (3) normalizes the residual
//! K = SO+(1,3) x SO(2m-4) gauge freedom by moving B_0 as close to the
//! identity as possible.

use crate::errors::DpwError;
use crate::loop_matrix::{lorentz_metric, CMat, LoopMatrix};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

type C = Complex64;

/// Convergence target for reality/membership defects.
pub const TAU_GROUP: f64 = 1e-10;
pub const MAX_ITER: usize = 100;

#[derive(Clone, Debug, Serialize)]
pub struct IwasawaDiagnostics {
    pub reality_defect: f64,
    pub group_defect: f64,
    pub twist_defect: f64,
    pub gauge_defect: f64,
    pub newton_iters: usize,
    pub nullity: usize,
}

pub struct IwasawaResult {
    /// The real extended-frame value F = F_- F_+ at this point.
    pub frame: LoopMatrix,
    pub f_plus: LoopMatrix,
    pub diagnostics: IwasawaDiagnostics,
}

/// Seed for the Newton stage: the solution at a neighboring grid point.
#[derive(Clone)]
pub struct IwasawaSeed {
    pub b: Vec<CMat>,
}

impl IwasawaSeed {
    pub fn identity(dim: usize, kmax: usize) -> Self {
        let mut b = vec![DMatrix::zeros(dim, dim); kmax + 1];
        b[0] = DMatrix::identity(dim, dim);
        IwasawaSeed { b }
    }
}

/// Sparsity pattern of the twisted positive loop: complex entries (k, r, c)
/// with block-diagonal support for even k and off-diagonal for odd k.
fn entry_pattern(dim: usize, kmax: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for k in 0..=kmax {
        let odd = k % 2 == 1;
        for r in 0..dim {
            for c in 0..dim {
                let off = (r < 4) != (c < 4);
                if off == odd {
                    out.push((k, r, c));
                }
            }
        }
    }
    out
}

fn unpack(entries: &[(usize, usize, usize)], x: &DVector<f64>, dim: usize, kmax: usize) -> Vec<CMat> {
    let mut b = vec![DMatrix::zeros(dim, dim); kmax + 1];
    for (e, &(k, r, c)) in entries.iter().enumerate() {
        b[k][(r, c)] = C::new(x[2 * e], x[2 * e + 1]);
    }
    b
}

fn pack(entries: &[(usize, usize, usize)], b: &[CMat]) -> DVector<f64> {
    // seeds from neighboring points may carry a shorter window
    let mut x = DVector::zeros(2 * entries.len());
    for (e, &(k, r, c)) in entries.iter().enumerate() {
        if let Some(bk) = b.get(k) {
            x[2 * e] = bk[(r, c)].re;
            x[2 * e + 1] = bk[(r, c)].im;
        }
    }
    x
}

/// Real matrix of the homogeneous linear system "F_- F_+ is real on S^1".
fn reality_matrix(f_minus: &LoopMatrix, entries: &[(usize, usize, usize)], kmax: usize) -> DMatrix<f64> {
    let dim = f_minus.dim();
    let n_rows = (kmax + 1) * dim * dim * 2;
    let n_cols = entries.len() * 2;
    let mut jac = DMatrix::zeros(n_rows, n_cols);
    // residual block k: C_k - conj(C_{-k}), C_j = sum_b A_{j-b} B_b
    for (e, &(b_idx, u, v)) in entries.iter().enumerate() {
        for k in 0..=kmax {
            // alpha: coefficient of w      in (C_k)_{p,v}        = (A_{k-b})_{p,u}
            // beta : coefficient of conj(w) in -conj(C_{-k})_{p,v} = -conj((A_{-k-b})_{p,u})
            let a_k = f_minus.coeff(k as i32 - b_idx as i32);
            let a_mk = f_minus.coeff(-(k as i32) - b_idx as i32);
            for p in 0..dim {
                let alpha = a_k[(p, u)];
                let beta = -a_mk[(p, u)].conj();
                let row = 2 * (k * dim * dim + p * dim + v);
                // rho = alpha w + beta conj(w), w = x_{2e} + i x_{2e+1}
                let d_re = alpha + beta; // d rho / d Re(w)
                let d_im = C::new(0.0, 1.0) * (alpha - beta); // d rho / d Im(w)
                jac[(row, 2 * e)] += d_re.re;
                jac[(row + 1, 2 * e)] += d_re.im;
                jac[(row, 2 * e + 1)] += d_im.re;
                jac[(row + 1, 2 * e + 1)] += d_im.im;
            }
        }
    }
    jac
}

/// Membership residual vector g(t) = vec(B_0^t I B_0 - I) and its Jacobian
/// with respect to the nullspace coordinates t (B = sum_j t_j N_j).
fn membership_residual(
    b0: &CMat,
    null_b0: &[CMat],
    metric: &CMat,
) -> (DVector<f64>, DMatrix<f64>) {
    let dim = b0.nrows();
    let g = b0.transpose() * metric * b0 - metric;
    // symmetric: take upper triangle
    let n_eq = dim * (dim + 1) / 2;
    let mut res = DVector::zeros(2 * n_eq);
    let mut jac = DMatrix::zeros(2 * n_eq, null_b0.len());
    let mut row = 0;
    for p in 0..dim {
        for q in p..dim {
            res[2 * row] = g[(p, q)].re;
            res[2 * row + 1] = g[(p, q)].im;
            for (j, nb) in null_b0.iter().enumerate() {
                // d/dt_j (B^t I B) = N^t I B + B^t I N
                let d = (nb.transpose() * metric * b0 + b0.transpose() * metric * nb)[(p, q)];
                jac[(2 * row, j)] = d.re;
                jac[(2 * row + 1, j)] = d.im;
            }
            row += 1;
        }
    }
    (res, jac)
}

/// The K-gauge normalization: right-multiply by k in SO+(1,3) x SO(2m-4)
/// minimizing || B_0 k - I ||_F. Returns (k, remaining distance).
fn gauge_fix(b0: &CMat) -> (CMat, f64) {
    let dim = b0.nrows();
    let gens = gauge_generators(dim);
    let mut k = DMatrix::<f64>::identity(dim, dim);
    for _ in 0..60 {
        let b0k = b0 * &k.map(|v| C::new(v, 0.0));
        // residual rho = vec(B0 k - I); columns d rho = vec(B0 k X_i)
        let n_rows = 2 * dim * dim;
        let mut jac = DMatrix::<f64>::zeros(n_rows, gens.len());
        let mut res = DVector::<f64>::zeros(n_rows);
        for p in 0..dim {
            for q in 0..dim {
                let row = 2 * (p * dim + q);
                let target = if p == q { C::new(1.0, 0.0) } else { C::new(0.0, 0.0) };
                let v = b0k[(p, q)] - target;
                res[row] = v.re;
                res[row + 1] = v.im;
            }
        }
        for (i, x) in gens.iter().enumerate() {
            let d = &b0k * &x.map(|v| C::new(v, 0.0));
            for p in 0..dim {
                for q in 0..dim {
                    let row = 2 * (p * dim + q);
                    jac[(row, i)] = d[(p, q)].re;
                    jac[(row + 1, i)] = d[(p, q)].im;
                }
            }
        }
        let jt = jac.transpose();
        let mut a = &jt * &jac;
        for d in 0..gens.len() {
            a[(d, d)] += 1e-12;
        }
        let rhs = -(&jt * &res);
        let Some(chol) = a.cholesky() else { break };
        let delta = chol.solve(&rhs);
        if delta.norm() < 1e-14 {
            break;
        }
        // k <- k exp(sum delta_i X_i)
        let mut xsum = DMatrix::<f64>::zeros(dim, dim);
        for (i, x) in gens.iter().enumerate() {
            xsum += x.map(|v| v * delta[i]);
        }
        k *= real_exp(&xsum);
    }
    let dist = (b0 * &k.map(|v| C::new(v, 0.0)) - CMat::identity(dim, dim))
        .iter()
        .map(|v| v.norm())
        .fold(0.0, f64::max);
    (k.map(|v| C::new(v, 0.0)), dist)
}

/// Basis of the real gauge algebra so(1,3) + so(2m-4) in block form.
fn gauge_generators(dim: usize) -> Vec<DMatrix<f64>> {
    let mut gens = Vec::new();
    // so(1,3) on the first 4 coordinates: rotations and boosts
    for a in 0..4usize {
        for b in (a + 1)..4 {
            let mut x = DMatrix::zeros(dim, dim);
            if a == 0 {
                // boost: symmetric pair
                x[(0, b)] = 1.0;
                x[(b, 0)] = 1.0;
            } else {
                x[(a, b)] = 1.0;
                x[(b, a)] = -1.0;
            }
            gens.push(x);
        }
    }
    // so(2m-4) on the rest
    for a in 4..dim {
        for b in (a + 1)..dim {
            let mut x = DMatrix::zeros(dim, dim);
            x[(a, b)] = 1.0;
            x[(b, a)] = -1.0;
            gens.push(x);
        }
    }
    gens
}

fn real_exp(x: &DMatrix<f64>) -> DMatrix<f64> {
    // scaling and squaring with a Taylor series; inputs here are small
    let dim = x.nrows();
    let norm = x.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let s = ((norm * 4.0).log2().ceil().max(0.0)) as u32;
    let xs = x.map(|v| v / 2f64.powi(s as i32));
    let mut term = DMatrix::<f64>::identity(dim, dim);
    let mut acc = DMatrix::<f64>::identity(dim, dim);
    for k in 1..16 {
        term = &term * &xs / k as f64;
        acc += &term;
    }
    for _ in 0..s {
        acc = &acc * &acc;
    }
    acc
}

/// Split F_- at one point. `seed` carries the neighbor solution for
/// continuation (identity at the base point).
pub fn iwasawa_at_point(
    f_minus: &LoopMatrix,
    seed: &IwasawaSeed,
) -> Result<IwasawaResult, DpwError> {
    let dim = f_minus.dim();
    let kmax = (-f_minus.k_min).max(0) as usize;
    let entries = entry_pattern(dim, kmax);
    let metric = lorentz_metric(dim);

    // 1. nullspace of the reality system
    let jac = reality_matrix(f_minus, &entries, kmax);
    let svd = nalgebra::SVD::new(jac, false, true);
    let v_t = svd.v_t.as_ref().unwrap();
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let tol = smax.max(1.0) * 1e-9;
    let mut null_cols: Vec<usize> = Vec::new();
    for (i, s) in svd.singular_values.iter().enumerate() {
        if *s <= tol {
            null_cols.push(i);
        }
    }
    // singular values only cover min(rows, cols); remaining rows of v_t are
    // also nullspace when rows < cols (not the case here, rows > cols)
    let expected_nullity = 16 + (dim - 4) * (dim - 4);
    let nullity = null_cols.len() + v_t.nrows().saturating_sub(svd.singular_values.len());
    if nullity < expected_nullity {
        return Err(DpwError::OutsideBigCell(format!(
            "reality system nullity {nullity}, expected {expected_nullity}"
        )));
    }
    let null_basis: Vec<DVector<f64>> = null_cols
        .iter()
        .map(|&i| v_t.row(i).transpose())
        .collect();

    // nullspace basis as B-coefficient matrices
    let null_mats: Vec<Vec<CMat>> = null_basis
        .iter()
        .map(|v| unpack(&entries, v, dim, kmax))
        .collect();

    // 2. Newton on t for B_0(t)^t I B_0(t) = I, seeded by projecting the
    //    neighbor solution onto the nullspace
    let seed_x = pack(&entries, &seed.b);
    let mut t = DVector::<f64>::zeros(null_basis.len());
    for (j, v) in null_basis.iter().enumerate() {
        t[j] = v.dot(&seed_x);
    }
    if t.norm() < 1e-8 {
        // seed orthogonal to the cell: fall back to the identity direction
        let id_x = pack(&entries, &IwasawaSeed::identity(dim, kmax).b);
        for (j, v) in null_basis.iter().enumerate() {
            t[j] = v.dot(&id_x);
        }
    }

    let assemble_b = |t: &DVector<f64>| -> Vec<CMat> {
        let mut b = vec![DMatrix::zeros(dim, dim); kmax + 1];
        for (j, mats) in null_mats.iter().enumerate() {
            for (k, mat) in mats.iter().enumerate() {
                b[k] += mat.map(|v| v * C::new(t[j], 0.0));
            }
        }
        b
    };
    let null_b0: Vec<CMat> = null_mats.iter().map(|mats| mats[0].clone()).collect();

    let mut iters = 0;
    let mut lm = 1e-10;
    loop {
        let b = assemble_b(&t);
        let (res, jac_t) = membership_residual(&b[0], &null_b0, &metric);
        let rnorm = res.amax();
        if rnorm < TAU_GROUP * 0.01 {
            break;
        }
        if iters >= MAX_ITER {
            return Err(DpwError::OutsideBigCell(format!(
                "membership Newton stalled at residual {rnorm:.3e}"
            )));
        }
        let jt = jac_t.transpose();
        let mut a = &jt * &jac_t;
        let n = a.nrows();
        for d in 0..n {
            a[(d, d)] += lm * (1.0 + a[(d, d)]);
        }
        let rhs = -(&jt * &res);
        let Some(chol) = a.cholesky() else {
            return Err(DpwError::OutsideBigCell("normal equations not SPD".into()));
        };
        let delta = chol.solve(&rhs);
        // line search on the residual norm
        let mut step = 1.0;
        let base = res.norm();
        let mut accepted = false;
        for _ in 0..20 {
            let t_try = &t + &delta * step;
            let b_try = assemble_b(&t_try);
            let (r_try, _) = membership_residual(&b_try[0], &null_b0, &metric);
            if r_try.norm() < base {
                t = t_try;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            lm *= 10.0;
            if lm > 1e3 {
                return Err(DpwError::OutsideBigCell(
                    "membership Newton cannot descend".into(),
                ));
            }
        } else {
            lm = (lm * 0.3).max(1e-12);
        }
        iters += 1;
    }

    // 3a. component correction: the splitting statement concerns the identity
    // components, but the quadratic stage can land in any of the components
    // of O(1,3) x O(2m-4). Detect the frame's component at lambda = 1 and
    // correct by constant discrete gauge flips (time reversal in the first
    // block, then a determinant flip) so F lies in SO+.
    let mut b = assemble_b(&t);
    {
        let f_plus = LoopMatrix {
            k_min: 0,
            coeffs: b.clone(),
        };
        let f1 = f_minus.mul(&f_plus).eval(C::new(1.0, 0.0));
        let f1_real = f1.map(|v| v.re);
        if f1_real[(0, 0)] < 0.0 {
            // tau = diag(-1,1,1,-1 | I): time-reversing, det +1
            let mut tau = CMat::identity(dim, dim);
            tau[(0, 0)] = C::new(-1.0, 0.0);
            tau[(3, 3)] = C::new(-1.0, 0.0);
            for mat in b.iter_mut() {
                *mat = &*mat * &tau;
            }
        }
        let f_plus = LoopMatrix {
            k_min: 0,
            coeffs: b.clone(),
        };
        let f1 = f_minus.mul(&f_plus).eval(C::new(1.0, 0.0));
        if f1.map(|v| v.re).determinant() < 0.0 {
            // sigma = diag(1,1,1,-1 | I): orientation flip, time-preserving
            let mut sigma = CMat::identity(dim, dim);
            sigma[(3, 3)] = C::new(-1.0, 0.0);
            for mat in b.iter_mut() {
                *mat = &*mat * &sigma;
            }
        }
    }

    // 3b. continuous gauge normalization
    let (k_gauge, gauge_defect) = gauge_fix(&b[0]);
    let b: Vec<CMat> = b.iter().map(|m| m * &k_gauge).collect();

    let f_plus = LoopMatrix {
        k_min: 0,
        coeffs: b.clone(),
    };
    let frame = f_minus.mul(&f_plus).trim();
    let diagnostics = IwasawaDiagnostics {
        reality_defect: frame.reality_defect(),
        group_defect: frame.group_defect(9),
        twist_defect: frame.twist_defect(),
        gauge_defect,
        newton_iters: iters,
        nullity,
    };
    if diagnostics.reality_defect > TAU_GROUP || diagnostics.group_defect > TAU_GROUP {
        return Err(DpwError::OutsideBigCell(format!(
            "defects after convergence: reality {:.2e}, group {:.2e}",
            diagnostics.reality_defect, diagnostics.group_defect
        )));
    }
    Ok(IwasawaResult {
        frame,
        f_plus,
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame_series::integrate_potential;
    use wll_core::potential::example_potential;
    use wll_core::scalar::{GaussRational, Scalar};

    #[test]
    fn identity_loop_splits_trivially() {
        let id = LoopMatrix::identity(8);
        let seed = IwasawaSeed::identity(8, 0);
        let r = iwasawa_at_point(&id, &seed).unwrap();
        let f1 = r.frame.eval(C::new(1.0, 0.0));
        let d = &f1 - CMat::identity(8, 8);
        assert!(d.iter().map(|v| v.norm()).fold(0.0, f64::max) < 1e-9);
        assert!(r.diagnostics.reality_defect < 1e-12);
    }

    #[test]
    fn splits_the_example_frame_near_base_point() {
        let p = example_potential();
        let f = integrate_potential(&p, &GaussRational::from_int(0)).unwrap();
        let fm = f.eval(C::new(0.05, 0.02));
        let seed = IwasawaSeed::identity(8, (-fm.k_min) as usize);
        let r = iwasawa_at_point(&fm, &seed).unwrap();
        assert!(r.diagnostics.reality_defect < 1e-10, "{:?}", r.diagnostics);
        assert!(r.diagnostics.group_defect < 1e-10);
        assert_eq!(r.diagnostics.twist_defect, 0.0);
        // reconstruction: F_- = F F_+^{-1} means F = F_- F_+ by construction;
        // check F equals F_- at lambda where F_+ ~ upper part
        let l = C::from_polar(1.0, 0.7);
        let lhs = r.frame.eval(l);
        let rhs = fm.eval(l) * r.f_plus.eval(l);
        let d = &lhs - &rhs;
        assert!(d.iter().map(|v| v.norm()).fold(0.0, f64::max) < 1e-10);
    }

    #[test]
    fn farther_point_with_continuation() {
        let p = example_potential();
        let f = integrate_potential(&p, &GaussRational::from_int(0)).unwrap();
        let mut seed = IwasawaSeed::identity(8, 2);
        // walk outward
        for step in 1..=6 {
            let z = C::new(0.1 * step as f64, 0.08 * step as f64);
            let fm = f.eval(z);
            let r = iwasawa_at_point(&fm, &seed).unwrap();
            assert!(r.diagnostics.reality_defect < 1e-10, "z = {z}");
            seed = IwasawaSeed {
                b: r.f_plus.coeffs.clone(),
            };
        }
    }
}
