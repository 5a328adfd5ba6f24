//! The full construction: integrate a normalized potential to a meromorphic
//! loop frame, split it pointwise by loop Iwasawa, adapt the frame gauge to
//! the surface ruling, and project to the sphere.
//!
//! The surface comes out of the frame through the connection form: the
//! lambda^{-1} block of the extended frame's Maurer-Cartan form is
//! B_0^{-1} eta(z) B_0 restricted to the upper-right 4 x (2m-4) block, whose
//! column span is an isotropic 2-plane. That plane contains exactly one real
//! ray; pushing it through the frame gives the light-cone lift of the
//! surface point, independently of the K-gauge of the splitting.

use crate::errors::DpwError;
use crate::frame_series::{integrate_numeric, integrate_potential};
use crate::iwasawa::{iwasawa_at_point, IwasawaDiagnostics, IwasawaSeed};
use crate::loop_matrix::{CMat, LoopMatrix};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;
use wll_core::minkowski::{is_forward_lightlike_f64, projectivize};
use wll_core::potential::{eta_minus_one, NormalizedPotential};
use wll_core::scalar::{GaussRational, Scalar};
pub use wll_surface::source::closed_form_example;

type C = Complex64;

#[derive(Clone, Debug, Serialize)]
pub struct PointDiagnostics {
    pub reality: f64,
    pub group: f64,
    pub twist: f64,
    pub lightlike: f64,
    pub adapt: f64,
    pub newton_iters: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SurfaceSample {
    pub z: (f64, f64),
    pub lambda_index: usize,
    /// Unit vector in R^{n+3}.
    pub point: Vec<f64>,
    pub diagnostics: PointDiagnostics,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuarantinedPoint {
    pub z: (f64, f64),
    pub reason: String,
}

#[derive(Clone, Debug, Serialize, Default)]
pub struct PipelineSummary {
    pub points_ok: usize,
    pub points_quarantined: usize,
    pub max_reality_defect: f64,
    pub max_group_defect: f64,
    pub max_twist_defect: f64,
    pub max_lightlike_defect: f64,
    pub max_adapt_defect: f64,
    pub frame_window: usize,
    pub mc_exact: bool,
    pub membership_exact: bool,
    pub twisting_exact: bool,
}

pub struct PipelineRun {
    pub samples: Vec<SurfaceSample>,
    pub quarantined: Vec<QuarantinedPoint>,
    pub summary: PipelineSummary,
}

/// Orthonormal span pair (u1, u2) with the pivot scales (s1, s2, s3).
type SpanPair = (Vec<C>, Vec<C>, [f64; 3]);

/// Orthonormal pair spanning the columns of a rank-2 complex 4 x n block,
/// by column-pivoted modified Gram-Schmidt. Returns the residual scales
/// (s1, s2, s3): s2/s1 small means rank < 2, s3/s1 large means rank > 2.
fn column_span_pair(
    block: &DMatrix<C>,
) -> Result<SpanPair, DpwError> {
    let n = block.ncols();
    let mut cols: Vec<Vec<C>> = (0..n)
        .map(|c| (0..4).map(|r| block[(r, c)]).collect())
        .collect();
    let hnorm = |v: &Vec<C>| -> f64 { v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt() };
    let pick = |cols: &Vec<Vec<C>>| -> (usize, f64) {
        let mut best = (0usize, 0.0f64);
        for (i, c) in cols.iter().enumerate() {
            let nn = hnorm(c);
            if nn > best.1 {
                best = (i, nn);
            }
        }
        best
    };
    let (i1, s1) = pick(&cols);
    if s1 == 0.0 {
        return Err(DpwError::DegenerateFrame(
            "connection block vanishes: surface ray not determined".into(),
        ));
    }
    let u1: Vec<C> = cols[i1].iter().map(|x| x / C::new(s1, 0.0)).collect();
    for c in cols.iter_mut() {
        let proj: C = u1.iter().zip(c.iter()).map(|(a, b)| a.conj() * *b).sum();
        for (k, uk) in u1.iter().enumerate() {
            c[k] -= proj * uk;
        }
    }
    let (i2, s2) = pick(&cols);
    if s2 < 1e-10 * s1 {
        return Err(DpwError::DegenerateFrame(format!(
            "connection block rank < 2 (scales {s1:.2e}, {s2:.2e}): surface ray not determined"
        )));
    }
    let u2: Vec<C> = cols[i2].iter().map(|x| x / C::new(s2, 0.0)).collect();
    for c in cols.iter_mut() {
        let proj: C = u2.iter().zip(c.iter()).map(|(a, b)| a.conj() * *b).sum();
        for (k, uk) in u2.iter().enumerate() {
            c[k] -= proj * uk;
        }
    }
    let (_, s3) = pick(&cols);
    if s3 > 1e-6 * s1 {
        return Err(DpwError::DegenerateFrame(format!(
            "connection block rank > 2 (scales {s1:.2e}, {s2:.2e}, {s3:.2e}): \
             isotropy structure violated"
        )));
    }
    Ok((u1, u2, [s1, s2, s3]))
}

/// Extract the surface point from a frame value: find the real ray of the
/// isotropic column span of the connection block and project it through the
/// frame at each lambda sample.
fn project_adapted(
    frame: &LoopMatrix,
    eta_block: &DMatrix<C>,
    lambdas: &[C],
) -> Result<(Vec<Vec<f64>>, f64, f64), DpwError> {
    // Column span of the 4 x (2m-4) block by column-pivoted modified
    // Gram-Schmidt (the complex SVD is not reliable enough for the span).
    let (u1, u2, span_scales) = column_span_pair(eta_block)?;
    // real ray: Im(c1 u1 + c2 u2) = 0, unknowns (Re c1, Re c2, Im c1, Im c2)
    let mut m = DMatrix::<f64>::zeros(4, 4);
    for p in 0..4 {
        m[(p, 0)] = u1[p].im;
        m[(p, 1)] = u2[p].im;
        m[(p, 2)] = u1[p].re;
        m[(p, 3)] = u2[p].re;
    }
    let msvd = nalgebra::SVD::new(m, false, true);
    let vt = msvd.v_t.as_ref().unwrap();
    let msv = &msvd.singular_values;
    let mut morder: Vec<usize> = (0..4).collect();
    morder.sort_by(|&a, &b| msv[b].partial_cmp(&msv[a]).unwrap());
    let adapt_defect = msv[morder[3]] / msv[morder[0]].max(1e-300);
    let cvec = vt.row(morder[3]);
    let c1 = C::new(cvec[0], cvec[2]);
    let c2 = C::new(cvec[1], cvec[3]);
    let mut w = [0.0f64; 4];
    let mut im_norm = 0.0f64;
    for p in 0..4 {
        let v = c1 * u1[p] + c2 * u2[p];
        w[p] = v.re;
        im_norm = im_norm.max(v.im.abs());
    }
    let wnorm = w.iter().map(|v| v * v).sum::<f64>().sqrt();
    if wnorm < 1e-12 {
        return Err(DpwError::Projection("real ray collapsed".into()));
    }

    let dim = frame.dim();
    let mut per_lambda = Vec::with_capacity(lambdas.len());
    let mut lightlike_defect: f64 = 0.0;
    for &l in lambdas {
        let fval = frame.eval(l);
        let mut x = vec![0.0f64; dim];
        let mut xim: f64 = 0.0;
        for r in 0..dim {
            let mut acc = C::new(0.0, 0.0);
            for (p, wp) in w.iter().enumerate() {
                acc += fval[(r, p)] * C::new(*wp, 0.0);
            }
            x[r] = acc.re;
            xim = xim.max(acc.im.abs());
        }
        // Lorentz square relative defect
        let mut q = -x[0] * x[0];
        let mut scale = x[0] * x[0];
        for v in &x[1..] {
            q += v * v;
            scale += v * v;
        }
        lightlike_defect = lightlike_defect
            .max(q.abs() / scale.max(1e-300))
            .max(xim / scale.sqrt().max(1e-300));
        if x[0] < 0.0 {
            for v in x.iter_mut() {
                *v = -*v;
            }
        }
        if x[0].abs() < 1e-12 {
            return Err(DpwError::Projection(
                "projective point at the chart infinity (zero first entry)".into(),
            ));
        }
        if !is_forward_lightlike_f64(&x) {
            let qw = -w[0] * w[0] + w[1] * w[1] + w[2] * w[2] + w[3] * w[3];
            return Err(DpwError::Projection(format!(
                "frame image not forward lightlike (defect {lightlike_defect:.2e}; \
                 q(w) = {qw:.3e}, span scales {span_scales:?})"
            )));
        }
        per_lambda.push(projectivize(&x).map_err(|e| DpwError::Projection(e.to_string()))?);
    }
    Ok((per_lambda, lightlike_defect, adapt_defect))
}

/// Projection of a plain frame value by its first two columns, after the
/// paper's frame normal form: y = [phi_1 - phi_2]. Valid for frames already
/// adapted to the surface (the pipeline adapts via the connection block).
pub fn project_surface(frame_value: &CMat) -> Result<Vec<f64>, DpwError> {
    let dim = frame_value.nrows();
    let mut x = vec![0.0f64; dim];
    for r in 0..dim {
        let v = frame_value[(r, 0)] - frame_value[(r, 1)];
        if v.im.abs() > 1e-8 {
            return Err(DpwError::Projection("frame not real".into()));
        }
        x[r] = v.re;
    }
    if x[0] < 0.0 {
        for v in x.iter_mut() {
            *v = -*v;
        }
    }
    if !is_forward_lightlike_f64(&x) {
        return Err(DpwError::Projection(
            "phi_1 - phi_2 is not forward lightlike: frame corrupted".into(),
        ));
    }
    projectivize(&x).map_err(|e| DpwError::Projection(e.to_string()))
}

pub struct GridSpec {
    pub res: usize,
    pub radius: f64,
    /// Keep only points inside the disk |z| <= radius.
    pub disk: bool,
}

impl GridSpec {
    pub fn points(&self) -> Vec<C> {
        let mut out = Vec::new();
        for a in 0..self.res {
            for b in 0..self.res {
                let z = C::new(
                    -self.radius + 2.0 * self.radius * a as f64 / (self.res - 1) as f64,
                    -self.radius + 2.0 * self.radius * b as f64 / (self.res - 1) as f64,
                );
                if !self.disk || z.norm() <= self.radius + 1e-12 {
                    out.push(z);
                }
            }
        }
        out
    }
}

/// Run the construction over a grid. Points are processed outward from the
/// base point with the nearest processed neighbor's splitting as the Newton
/// seed; failures are quarantined and the run continues.
pub fn run_pipeline(
    potential: &NormalizedPotential,
    grid: &GridSpec,
    lambdas: &[C],
) -> Result<PipelineRun, DpwError> {
    let z0 = GaussRational::from_int(0);
    let exact = match integrate_potential(potential, &z0) {
        Ok(f) => Some(f),
        Err(DpwError::NonPolynomial(_)) => None,
        Err(e) => return Err(e),
    };
    let mut summary = PipelineSummary::default();
    if let Some(f) = &exact {
        summary.frame_window = f.depth();
        summary.mc_exact = f.maurer_cartan_is_exact(potential);
        summary.membership_exact = f.membership_is_exact();
        summary.twisting_exact = f.twisting_is_exact();
    }

    let eta_rf = eta_minus_one(potential);
    let dim = 2 * potential.m;
    let eta_at = |z: C| -> DMatrix<C> {
        let mut out = DMatrix::zeros(dim, dim);
        for r in 0..dim {
            for c in 0..dim {
                out[(r, c)] = eta_rf[(r, c)].eval_c64(z);
            }
        }
        out
    };

    let mut points = grid.points();
    points.sort_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap());

    let mut samples = Vec::new();
    let mut quarantined = Vec::new();
    let mut solved: Vec<(C, IwasawaSeed)> = Vec::new();

    for z in points {
        let f_minus = match &exact {
            Some(f) => f.eval(z),
            None => match integrate_numeric(potential, C::new(0.0, 0.0), z, 400) {
                Ok(f) => f,
                Err(e) => {
                    quarantined.push(QuarantinedPoint {
                        z: (z.re, z.im),
                        reason: e.to_string(),
                    });
                    continue;
                }
            },
        };
        let kmax = (-f_minus.k_min).max(0) as usize;
        let seed = solved
            .iter()
            .min_by(|a, b| {
                (a.0 - z)
                    .norm()
                    .partial_cmp(&(b.0 - z).norm())
                    .unwrap()
            })
            .map(|(_, s)| s.clone())
            .unwrap_or_else(|| IwasawaSeed::identity(dim, kmax));
        match iwasawa_at_point(&f_minus, &seed) {
            Ok(res) => {
                let b0 = res.f_plus.coeff(0);
                let Some(b0_inv) = b0.clone().try_inverse() else {
                    quarantined.push(QuarantinedPoint {
                        z: (z.re, z.im),
                        reason: "B_0 not invertible".into(),
                    });
                    continue;
                };
                let conn = &b0_inv * &eta_at(z) * &b0;
                let block = conn.view((0, 4), (4, dim - 4)).into_owned();
                match project_adapted(&res.frame, &block, lambdas) {
                    Ok((pts, lightlike, adapt)) => {
                        let d = &res.diagnostics;
                        track(&mut summary, d, lightlike, adapt);
                        for (li, p) in pts.into_iter().enumerate() {
                            samples.push(SurfaceSample {
                                z: (z.re, z.im),
                                lambda_index: li,
                                point: p,
                                diagnostics: PointDiagnostics {
                                    reality: d.reality_defect,
                                    group: d.group_defect,
                                    twist: d.twist_defect,
                                    lightlike,
                                    adapt,
                                    newton_iters: d.newton_iters,
                                },
                            });
                        }
                        summary.points_ok += 1;
                        solved.push((
                            z,
                            IwasawaSeed {
                                b: res.f_plus.coeffs.clone(),
                            },
                        ));
                    }
                    Err(e) => quarantined.push(QuarantinedPoint {
                        z: (z.re, z.im),
                        reason: e.to_string(),
                    }),
                }
            }
            Err(e) => quarantined.push(QuarantinedPoint {
                z: (z.re, z.im),
                reason: e.to_string(),
            }),
        }
    }
    summary.points_quarantined = quarantined.len();
    Ok(PipelineRun {
        samples,
        quarantined,
        summary,
    })
}

fn track(summary: &mut PipelineSummary, d: &IwasawaDiagnostics, lightlike: f64, adapt: f64) {
    summary.max_reality_defect = summary.max_reality_defect.max(d.reality_defect);
    summary.max_group_defect = summary.max_group_defect.max(d.group_defect);
    summary.max_twist_defect = summary.max_twist_defect.max(d.twist_defect);
    summary.max_lightlike_defect = summary.max_lightlike_defect.max(lightlike);
    summary.max_adapt_defect = summary.max_adapt_defect.max(adapt);
}

/// Orthogonal block-Procrustes fit: rotation diag(R3, R_{n}) in
/// O(3) x O(n) applied to the closed-form cloud to match the pipeline cloud
/// (first sphere coordinate is fixed by the conjugation class).
pub fn block_procrustes(pipeline: &[Vec<f64>], reference: &[Vec<f64>]) -> Vec<DMatrix<f64>> {
    assert_eq!(pipeline.len(), reference.len());
    let dim = pipeline[0].len();
    let blocks = [(1usize, 3usize), (4usize, dim - 4)];
    let mut rots = Vec::new();
    for &(start, len) in &blocks {
        let mut cross = DMatrix::<f64>::zeros(len, len);
        for (p, c) in pipeline.iter().zip(reference) {
            for i in 0..len {
                for j in 0..len {
                    cross[(i, j)] += c[start + i] * p[start + j];
                }
            }
        }
        let svd = nalgebra::SVD::new(cross, true, true);
        let u = svd.u.unwrap();
        let vt = svd.v_t.unwrap();
        rots.push((u * vt).transpose());
    }
    rots
}

/// Apply the block rotation fit to a reference cloud.
pub fn apply_block_rotation(rots: &[DMatrix<f64>], cloud: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let dim = cloud[0].len();
    let blocks = [(1usize, 3usize), (4usize, dim - 4)];
    cloud
        .iter()
        .map(|x| {
            let mut y = x.clone();
            for (bi, &(start, len)) in blocks.iter().enumerate() {
                for i in 0..len {
                    let mut acc = 0.0;
                    for j in 0..len {
                        acc += rots[bi][(i, j)] * x[start + j];
                    }
                    y[start + i] = acc;
                }
            }
            y
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyExampleReport {
    pub grid: String,
    pub lambdas: Vec<(f64, f64)>,
    /// Max deviation from the closed form per lambda after the allowed
    /// O(1,3) x O(n) conjugation fit.
    pub max_deviation: Vec<f64>,
    pub overall_max_deviation: f64,
    /// Acceptance tolerance this report is judged against.
    pub tolerance: f64,
    /// Gram-spectrum distance between the lambda clouds (rotation-invariant
    /// shape comparison).
    pub gram_spectrum_distance: f64,
    pub summary: PipelineSummary,
    pub elapsed_seconds: f64,
}

/// End-to-end oracle: run the pipeline on the explicit potential and compare
/// with the closed-form family after the block-rotation fit.
pub fn verify_example(grid: &GridSpec, lambdas: &[C]) -> Result<VerifyExampleReport, DpwError> {
    let started = std::time::Instant::now();
    let potential = wll_core::potential::example_potential();
    let run = run_pipeline(&potential, grid, lambdas)?;
    let mut max_deviation = vec![0.0f64; lambdas.len()];
    let mut clouds: Vec<Vec<Vec<f64>>> = vec![Vec::new(); lambdas.len()];
    for (li, lambda) in lambdas.iter().enumerate() {
        let pipeline: Vec<Vec<f64>> = run
            .samples
            .iter()
            .filter(|s| s.lambda_index == li)
            .map(|s| s.point.clone())
            .collect();
        let reference: Vec<Vec<f64>> = run
            .samples
            .iter()
            .filter(|s| s.lambda_index == li)
            .map(|s| closed_form_example(C::new(s.z.0, s.z.1), *lambda).to_vec())
            .collect();
        let rots = block_procrustes(&pipeline, &reference);
        let fitted = apply_block_rotation(&rots, &reference);
        for (p, f) in pipeline.iter().zip(&fitted) {
            let dev = p
                .iter()
                .zip(f)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            max_deviation[li] = max_deviation[li].max(dev);
        }
        clouds[li] = pipeline;
    }
    // lambda families related by a rotation: compare Gram spectra
    let mut gram_dist: f64 = 0.0;
    let spectra: Vec<Vec<f64>> = clouds.iter().map(|c| gram_spectrum(c)).collect();
    for s in &spectra[1..] {
        for (a, b) in s.iter().zip(&spectra[0]) {
            gram_dist = gram_dist.max((a - b).abs());
        }
    }
    let overall = max_deviation.iter().cloned().fold(0.0, f64::max);
    Ok(VerifyExampleReport {
        tolerance: 1e-8,
        grid: format!(
            "{}x{} grid, |z| <= {}{}",
            grid.res,
            grid.res,
            grid.radius,
            if grid.disk { " (disk)" } else { "" }
        ),
        lambdas: lambdas.iter().map(|l| (l.re, l.im)).collect(),
        max_deviation,
        overall_max_deviation: overall,
        gram_spectrum_distance: gram_dist,
        summary: run.summary,
        elapsed_seconds: started.elapsed().as_secs_f64(),
    })
}

fn gram_spectrum(cloud: &[Vec<f64>]) -> Vec<f64> {
    let dim = cloud[0].len();
    let mut gram = DMatrix::<f64>::zeros(dim, dim);
    for x in cloud {
        for i in 0..dim {
            for j in 0..dim {
                gram[(i, j)] += x[i] * x[j];
            }
        }
    }
    gram /= cloud.len() as f64;
    let mut eig: Vec<f64> = gram.symmetric_eigenvalues().iter().cloned().collect();
    eig.sort_by(|a, b| b.partial_cmp(a).unwrap());
    eig
}

/// The extended-frame shape diagnostic: finite differences of the frame over
/// a small stencil produce the Maurer-Cartan form; its Laurent coefficients
/// must concentrate on lambda^{-1}, lambda^0, lambda^1.
pub fn mc_window_defect(potential: &NormalizedPotential, z: C, h: f64) -> Result<f64, DpwError> {
    let z0 = GaussRational::from_int(0);
    let frame = integrate_potential(potential, &z0)?;
    let solve = |w: C, seed: &IwasawaSeed| -> Result<LoopMatrix, DpwError> {
        Ok(iwasawa_at_point(&frame.eval(w), seed)?.frame)
    };
    let dim = 2 * potential.m;
    let kmax = frame.depth();
    let seed0 = IwasawaSeed::identity(dim, kmax);
    let f0 = solve(z, &seed0)?;
    let fp = solve(z + C::new(h, 0.0), &seed0)?;
    let fm = solve(z - C::new(h, 0.0), &seed0)?;
    // d/du F * F^{-1}-free version: alpha_u = F^{-1} dF/du via central difference
    let metric = crate::loop_matrix::lorentz_metric(dim);
    let mut worst: f64 = 0.0;
    // evaluate at enough lambda samples to resolve the window
    let window = 2 * kmax as i32 + 2;
    let nl = (4 * window + 4) as usize;
    let mut coeffs: Vec<CMat> = vec![DMatrix::zeros(dim, dim); 2 * window as usize + 1];
    for s in 0..nl {
        let theta = 2.0 * std::f64::consts::PI * s as f64 / nl as f64;
        let l = C::from_polar(1.0, theta);
        let f0v = f0.eval(l);
        let finv = {
            // F^{-1} = I F^t I for group-valued frames
            let ft = f0v.transpose();
            &metric * ft * &metric
        };
        let du = (fp.eval(l) - fm.eval(l)).map(|v| v / (2.0 * h));
        let alpha = &finv * du;
        for (ki, c) in coeffs.iter_mut().enumerate() {
            let k = ki as i32 - window;
            let phase = C::from_polar(1.0, -(k as f64) * theta);
            *c += alpha.map(|v| v * phase / nl as f64);
        }
    }
    let scale = coeffs
        .iter()
        .flat_map(|c| c.iter())
        .map(|v| v.norm())
        .fold(1e-300, f64::max);
    for (ki, c) in coeffs.iter().enumerate() {
        let k = ki as i32 - window;
        if k.abs() > 1 {
            worst = worst.max(c.iter().map(|v| v.norm()).fold(0.0, f64::max) / scale);
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pipeline_matches_closed_form_small_grid() {
        let grid = GridSpec {
            res: 5,
            radius: 1.0,
            disk: true,
        };
        let lambdas = [C::new(1.0, 0.0), C::new(0.0, 1.0)];
        let rep = verify_example(&grid, &lambdas).unwrap();
        assert_eq!(rep.summary.points_quarantined, 0);
        assert!(
            rep.overall_max_deviation < 1e-8,
            "max deviation {:?}",
            rep.max_deviation
        );
        assert!(rep.gram_spectrum_distance < 1e-8);
        assert!(rep.summary.mc_exact && rep.summary.membership_exact && rep.summary.twisting_exact);
    }

    #[test]
    fn base_point_matches_closed_form() {
        // tiny grid hugging the base point
        let grid = GridSpec {
            res: 2,
            radius: 1e-6,
            disk: false,
        };
        let lambdas = [C::new(1.0, 0.0)];
        let rep = verify_example(&grid, &lambdas).unwrap();
        assert!(rep.overall_max_deviation < 1e-8);
    }

    #[test]
    fn identity_frame_has_no_surface_ray() {
        // the identity loop is a valid group element but its connection
        // block vanishes: the adapted projection must refuse it
        let frame = LoopMatrix::identity(8);
        let zero_block = DMatrix::<C>::zeros(4, 4);
        let err = project_adapted(&frame, &zero_block, &[C::new(1.0, 0.0)]);
        assert!(err.is_err());
    }

    #[test]
    fn rank_one_potential_fires_degeneracy_diagnostic() {
        use wll_core::potential::{s6_case_builder, S6Case, S6Inputs, RF};
        // type-(1) rank-1 potential with a constant lightlike direction
        let z = RF::var();
        let p = s6_case_builder(&S6Inputs {
            case: S6Case::Case1,
            fns: vec![RF::one(), z, RF::zero(), RF::zero(), RF::zero()],
        })
        .unwrap();
        let grid = GridSpec {
            res: 3,
            radius: 0.5,
            disk: false,
        };
        let run = run_pipeline(&p, &grid, &[C::new(1.0, 0.0)]).unwrap();
        // every point is quarantined by the rank-degeneracy diagnostic,
        // but the pipeline completed over the grid
        assert_eq!(run.summary.points_ok, 0);
        assert_eq!(run.summary.points_quarantined, 9);
        assert!(run
            .quarantined
            .iter()
            .all(|q| q.reason.contains("rank") || q.reason.contains("degenerate")));
    }
}
