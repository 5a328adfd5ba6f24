//! The adapted moving frame ((Y+N)/sqrt2, (-Y+N)/sqrt2, e1, e2, psi_1..psi_n)
//! and the connection-form checks of strong conformal harmonicity:
//! the upper-right block B1 of alpha_z must satisfy B1^t I_{1,3} B1 = 0 and
//! carry the row pattern (row2 = -row1, row4 = i row3).

use crate::analysis::{lift_jets, AnalysisOptions, SurfaceError};
use crate::jet::{jv_add, jv_lorentz, jv_scale, jv_sub, Jet, JetVec};
use crate::source::SurfaceMap;
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

type C = Complex64;

#[derive(Clone, Debug, Serialize)]
pub struct FrameReport {
    /// || F^t I F - I || at the point (frame orthonormality).
    pub frame_residual: f64,
    /// || B1^t I_{1,3} B1 || / ||B1||^2
    pub b1_isotropy_residual: f64,
    /// Row-pattern defect of B1, scale free.
    pub b1_shape_residual: f64,
    /// Numerical rank of B1 (singular values vs 1e-7 relative floor).
    pub b1_rank: usize,
    pub b1_singular_values: Vec<f64>,
}

/// The frame value at z as a real matrix: columns
/// ((Y+N)/sqrt2, (-Y+N)/sqrt2, e1, e2, psi_1..psi_n).
pub fn adapted_frame_value(
    map: &dyn SurfaceMap,
    z: C,
    opts: &AnalysisOptions,
) -> Result<DMatrix<f64>, SurfaceError> {
    let (jets, _) = lift_jets(map, z, opts)?;
    let cols = frame_columns(&jets)?;
    let dim = cols.len();
    let mut out = DMatrix::zeros(dim, dim);
    for (c, col) in cols.iter().enumerate() {
        for r in 0..dim {
            out[(r, c)] = col[r].value().re;
        }
    }
    Ok(out)
}

fn frame_columns(jets: &crate::analysis::LiftJets) -> Result<Vec<JetVec>, SurfaceError> {
    let dim = jets.dim + 1; // Lorentz ambient dimension 2m
    let sqrt2_inv = C::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let ord = jets.n_sec[0].ord; // order-2 jets; one derivative needed

    // phi1 = (Y+N)/sqrt2, phi2 = (-Y+N)/sqrt2
    let phi1 = jv_scale(&jv_add(&jets.lift, &jets.n_sec), &Jet::constant(sqrt2_inv, ord));
    let phi2 = jv_scale(&jv_sub(&jets.n_sec, &jets.lift), &Jet::constant(sqrt2_inv, ord));
    // e1 = Y_z + Y_zbar, e2 = i (Y_z - Y_zbar): unit by the lift normalization
    let e1 = jv_add(&jets.lift_z, &jets.lift_zbar);
    let e2 = jv_scale(
        &jv_sub(&jets.lift_z, &jets.lift_zbar),
        &Jet::constant(C::new(0.0, 1.0), ord),
    );

    // normal frame: Lorentz-project the standard basis onto the complement of
    // span{Y, Y_z, Y_zbar, N} and orthonormalize (Gram-Schmidt in jets)
    let tangent4: [&JetVec; 4] = [&jets.lift, &jets.lift_z, &jets.lift_zbar, &jets.n_sec];
    let gram: Vec<Vec<Jet>> = (0..4)
        .map(|i| (0..4).map(|j| jv_lorentz(tangent4[i], tangent4[j])).collect())
        .collect();
    let mut psis: Vec<JetVec> = Vec::new();
    for seed_idx in 0..dim {
        if psis.len() == dim - 4 {
            break;
        }
        let mut seed: JetVec = (0..dim)
            .map(|k| {
                Jet::constant(
                    if k == seed_idx {
                        C::new(1.0, 0.0)
                    } else {
                        C::new(0.0, 0.0)
                    },
                    ord,
                )
            })
            .collect();
        // project out the tangent 4-space
        let rhs: Vec<Jet> = (0..4).map(|i| jv_lorentz(&seed, tangent4[i])).collect();
        let coeffs = crate::jet::jet_solve(&gram, &rhs);
        for (c, f) in coeffs.iter().zip(tangent4.iter()) {
            seed = jv_sub(&seed, &jv_scale(f, c));
        }
        // project out previous psis (orthonormal, positive directions)
        for p in &psis {
            let c = jv_lorentz(&seed, p);
            seed = jv_sub(&seed, &jv_scale(p, &c));
        }
        let n2 = jv_lorentz(&seed, &seed);
        if n2.value().re < 1e-6 {
            continue; // seed nearly tangent, try the next one
        }
        let inv_len = n2.inv_sqrt();
        psis.push(jv_scale(&seed, &inv_len));
    }
    if psis.len() != dim - 4 {
        return Err(SurfaceError::DegenerateFrame(format!(
            "normal frame found {} of {} sections",
            psis.len(),
            dim - 4
        )));
    }

    let mut cols: Vec<JetVec> = vec![phi1, phi2, e1, e2];
    cols.extend(psis);
    Ok(cols)
}

/// Build the adapted frame at z in jet arithmetic and report the B1 block
/// conditions.
pub fn frame_condition(
    map: &dyn SurfaceMap,
    z: C,
    opts: &AnalysisOptions,
) -> Result<FrameReport, SurfaceError> {
    let (jets, _) = lift_jets(map, z, opts)?;
    let cols = frame_columns(&jets)?;
    let dim = jets.dim + 1;

    // orthonormality residual F^t I F - I at the point
    let metric_sign = |k: usize| if k == 0 { -1.0 } else { 1.0 };
    let mut frame_residual: f64 = 0.0;
    for a in 0..dim {
        for b in 0..dim {
            let pair = jv_lorentz(&cols[a], &cols[b]).value();
            let expect = if a == b { metric_sign(a) } else { 0.0 };
            frame_residual = frame_residual.max((pair - C::new(expect, 0.0)).norm());
        }
    }

    // alpha_z = F^{-1} dF/dz with F^{-1} = I_{1,..} F^t I_{1,..}:
    // (alpha_z)_{ab} = sign(a) <col_a, d_z col_b>
    let n_normal = dim - 4;
    let mut b1 = DMatrix::<C>::zeros(4, n_normal);
    for a in 0..4 {
        for b in 0..n_normal {
            let dcol: JetVec = cols[4 + b].iter().map(|j| j.d_z()).collect();
            let val = jv_lorentz(&cols[a], &dcol).value();
            b1[(a, b)] = C::new(metric_sign(a), 0.0) * val;
        }
    }

    let b1_norm: f64 = b1.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    // isotropy: B1^t I13 B1
    let mut iso: f64 = 0.0;
    for p in 0..n_normal {
        for q in 0..n_normal {
            let mut acc = -(b1[(0, p)] * b1[(0, q)]);
            for r in 1..4 {
                acc += b1[(r, p)] * b1[(r, q)];
            }
            iso = iso.max(acc.norm());
        }
    }
    let b1_isotropy_residual = iso / (b1_norm * b1_norm + 1e-300);

    // shape: row2 = -row1 and row4 = i row3
    let mut shape: f64 = 0.0;
    for q in 0..n_normal {
        shape = shape.max((b1[(1, q)] + b1[(0, q)]).norm());
        shape = shape.max((b1[(3, q)] - C::new(0.0, 1.0) * b1[(2, q)]).norm());
    }
    let b1_shape_residual = shape / (b1_norm + 1e-300);

    // numerical rank via the Hermitian Gram spectrum (the complex SVD is
    // less dependable than the symmetric eigensolver)
    let gram_h = b1.adjoint() * &b1;
    let mut sv: Vec<f64> = gram_h
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .map(|v| v.abs().sqrt())
        .collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let floor = sv.first().cloned().unwrap_or(0.0) * 1e-7;
    let b1_rank = sv.iter().filter(|&&s| s > floor && s > 1e-12).count();

    Ok(FrameReport {
        frame_residual,
        b1_isotropy_residual,
        b1_shape_residual,
        b1_rank,
        b1_singular_values: sv,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::source::{example_surface, round_sphere, FlatTorus};

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn example_frame_conditions() {
        let s = example_surface(c(1.0, 0.0), 5);
        let opts = AnalysisOptions::default();
        for z in [c(0.6, 0.2), c(-0.4, 0.9), c(1.1, -0.7)] {
            let r = frame_condition(&s, z, &opts).unwrap();
            assert!(r.frame_residual < 1e-9, "frame {}", r.frame_residual);
            assert!(r.b1_isotropy_residual < 1e-6, "iso {}", r.b1_isotropy_residual);
            assert!(r.b1_shape_residual < 1e-6, "shape {}", r.b1_shape_residual);
            assert_eq!(r.b1_rank, 2, "rank at {z}: {:?}", r.b1_singular_values);
        }
    }

    #[test]
    fn adapted_frames_are_isotropic_even_off_willmore() {
        // For frames built from the surface's own lift data, the B1 block has
        // the (sqrt2 b, -sqrt2 b, -k, -ik) column structure for every
        // conformal surface, so B1^t I_{1,3} B1 = 0 is structural here; the
        // Willmore property is detected by the Willmore residual instead.
        let t = FlatTorus::new(0.8, 7);
        let r = frame_condition(&t, c(0.3, 0.4), &AnalysisOptions::default()).unwrap();
        assert!(r.frame_residual < 1e-9);
        assert!(r.b1_isotropy_residual < 1e-8, "{}", r.b1_isotropy_residual);
        assert!(r.b1_shape_residual < 1e-8, "{}", r.b1_shape_residual);
    }

    #[test]
    fn round_sphere_b1_is_degenerate() {
        // kappa = 0 and Dzbar kappa = 0: B1 = 0 for the round sphere
        let s = round_sphere(7, 5);
        let r = frame_condition(&s, c(0.2, 0.5), &AnalysisOptions::default()).unwrap();
        assert_eq!(r.b1_rank, 0, "sv {:?}", r.b1_singular_values);
        assert!(r.frame_residual < 1e-9);
    }
}
