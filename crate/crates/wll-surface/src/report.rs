//! Grid-level verification runs aggregating the pointwise analysis into a
//! machine-readable report, plus the fullness proxy on the sample cloud.

use crate::analysis::{analyze_point, AnalysisOptions, PointReport};
use crate::frame::{frame_condition, FrameReport};
use crate::source::SurfaceMap;
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

type C = Complex64;

#[derive(Clone, Debug, Serialize)]
pub struct CheckSummary {
    pub max: f64,
    pub median: f64,
    pub tolerance: f64,
    pub pass: bool,
}

fn summarize(mut vals: Vec<f64>, tolerance: f64, upper: bool) -> CheckSummary {
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let max = vals.last().cloned().unwrap_or(0.0);
    let median = if vals.is_empty() {
        0.0
    } else {
        vals[vals.len() / 2]
    };
    let pass = if upper { max <= tolerance } else { median >= tolerance };
    CheckSummary {
        max,
        median,
        tolerance,
        pass,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SurfaceReport {
    pub grid: String,
    pub points_total: usize,
    pub points_quarantined: usize,
    pub unit_norm: CheckSummary,
    pub conformality: CheckSummary,
    pub lift_invariants: CheckSummary,
    pub willmore: CheckSummary,
    pub gauss: CheckSummary,
    pub codazzi: CheckSummary,
    pub ricci: CheckSummary,
    pub isotropy: CheckSummary,
    /// Lower bound check: median defect must stay above the tolerance.
    pub s_willmore_defect: CheckSummary,
    pub frame_isotropy: Option<CheckSummary>,
    pub frame_shape: Option<CheckSummary>,
    pub b1_rank_mode: Option<usize>,
    /// Smallest over largest singular value of the sample cloud Gram matrix.
    pub fullness_ratio: f64,
    pub all_pass: bool,
}

/// Tolerances for closed-form inputs; sampled (finite-difference) inputs
/// should pass multiples of these.
#[derive(Clone, Copy, Debug)]
pub struct Tolerances {
    pub unit_norm: f64,
    pub conformality: f64,
    pub lift: f64,
    pub willmore: f64,
    pub integrability: f64,
    pub isotropy: f64,
    pub s_willmore_floor: f64,
    pub frame: f64,
    pub fullness_floor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            unit_norm: 1e-12,
            conformality: 1e-9,
            lift: 1e-9,
            willmore: 1e-6,
            integrability: 1e-6,
            isotropy: 1e-6,
            s_willmore_floor: 0.1,
            frame: 1e-6,
            fullness_floor: 1e-3,
        }
    }
}

/// Run the full verification over a square grid |Re z|, |Im z| <= radius
/// with `res` points per side. Points are independent; `threads` caps the
/// worker count (1 = sequential), with deterministic merge order.
pub fn verify_surface(
    map: &(dyn SurfaceMap + Sync),
    radius: f64,
    res: usize,
    tol: &Tolerances,
    with_frame: bool,
    threads: usize,
) -> SurfaceReport {
    let opts = AnalysisOptions::default();
    let mut zs: Vec<C> = Vec::with_capacity(res * res);
    for a in 0..res {
        for b in 0..res {
            zs.push(C::new(
                -radius + 2.0 * radius * a as f64 / (res - 1) as f64,
                -radius + 2.0 * radius * b as f64 / (res - 1) as f64,
            ));
        }
    }
    type PointOut = (usize, Option<(PointReport, Vec<f64>, Option<FrameReport>)>);
    let work = |idx_z: &[(usize, C)]| -> Vec<PointOut> {
        idx_z
            .iter()
            .map(|&(i, z)| match analyze_point(map, z, &opts) {
                Ok(r) => {
                    let table = map.partials(z, 0);
                    let pos: Vec<f64> = table[0][0].iter().map(|v| v.re).collect();
                    let fr = if with_frame {
                        match frame_condition(map, z, &opts) {
                            Ok(f) => Some(f),
                            Err(_) => return (i, None),
                        }
                    } else {
                        None
                    };
                    (i, Some((r, pos, fr)))
                }
                Err(_) => (i, None),
            })
            .collect()
    };
    let indexed: Vec<(usize, C)> = zs.iter().cloned().enumerate().collect();
    let mut results: Vec<PointOut> = if threads <= 1 {
        work(&indexed)
    } else {
        let chunk = indexed.len().div_ceil(threads);
        std::thread::scope(|scope| {
            let handles: Vec<_> = indexed
                .chunks(chunk)
                .map(|slice| scope.spawn(move || work(slice)))
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("verification worker panicked"))
                .collect()
        })
    };
    results.sort_by_key(|(i, _)| *i);

    let total = zs.len();
    let mut reports: Vec<PointReport> = Vec::new();
    let mut frames: Vec<FrameReport> = Vec::new();
    let mut cloud: Vec<Vec<f64>> = Vec::new();
    let mut quarantined = 0usize;
    for (_, out) in results {
        match out {
            Some((r, pos, fr)) => {
                reports.push(r);
                cloud.push(pos);
                if let Some(f) = fr {
                    frames.push(f);
                }
            }
            None => quarantined += 1,
        }
    }

    summarize_checks(
        format!("{res}x{res} square, |Re z|,|Im z| <= {radius}"),
        total,
        quarantined,
        reports,
        frames,
        cloud,
        tol,
    )
}

/// Aggregate collected point data into the report (shared with sampled-grid
/// callers).
pub fn summarize_checks(
    grid: String,
    total: usize,
    quarantined: usize,
    reports: Vec<PointReport>,
    frames: Vec<FrameReport>,
    cloud: Vec<Vec<f64>>,
    tol: &Tolerances,
) -> SurfaceReport {
    let col = |f: &dyn Fn(&PointReport) -> f64| -> Vec<f64> { reports.iter().map(f).collect() };
    let unit_norm = summarize(col(&|r| r.unit_norm_residual), tol.unit_norm, true);
    let conformality = summarize(col(&|r| r.conformal_residual), tol.conformality, true);
    let lift_invariants = summarize(col(&|r| r.lift_residual), tol.lift, true);
    let willmore = summarize(col(&|r| r.willmore_residual), tol.willmore, true);
    let gauss = summarize(col(&|r| r.gauss_residual), tol.integrability, true);
    let codazzi = summarize(col(&|r| r.codazzi_residual), tol.integrability, true);
    let ricci = summarize(col(&|r| r.ricci_residual), tol.integrability, true);
    let isotropy = summarize(col(&|r| r.isotropy_defect), tol.isotropy, true);
    let s_willmore_defect = summarize(col(&|r| r.s_willmore_defect), tol.s_willmore_floor, false);

    let (frame_isotropy, frame_shape, b1_rank_mode) = if !frames.is_empty() {
        let fi = summarize(
            frames.iter().map(|f| f.b1_isotropy_residual).collect(),
            tol.frame,
            true,
        );
        let fs = summarize(
            frames.iter().map(|f| f.b1_shape_residual).collect(),
            tol.frame,
            true,
        );
        // most common rank
        let mut counts = std::collections::BTreeMap::new();
        for f in &frames {
            *counts.entry(f.b1_rank).or_insert(0usize) += 1;
        }
        let mode = counts.into_iter().max_by_key(|&(_, c)| c).map(|(r, _)| r);
        (Some(fi), Some(fs), mode)
    } else {
        (None, None, None)
    };

    let fullness_ratio = fullness(&cloud);

    let mut all_pass = unit_norm.pass
        && conformality.pass
        && lift_invariants.pass
        && willmore.pass
        && gauss.pass
        && codazzi.pass
        && ricci.pass
        && isotropy.pass
        && s_willmore_defect.pass
        && fullness_ratio > tol.fullness_floor;
    if let (Some(fi), Some(fs)) = (&frame_isotropy, &frame_shape) {
        all_pass = all_pass && fi.pass && fs.pass;
    }

    SurfaceReport {
        grid,
        points_total: total,
        points_quarantined: quarantined,
        unit_norm,
        conformality,
        lift_invariants,
        willmore,
        gauss,
        codazzi,
        ricci,
        isotropy,
        s_willmore_defect,
        frame_isotropy,
        frame_shape,
        b1_rank_mode,
        fullness_ratio,
        all_pass,
    }
}

/// Fullness proxy: sigma_min / sigma_max of the (uncentered) sample cloud,
/// i.e. the normalized Gram spectrum. Above the floor means the samples span
/// the whole ambient space.
pub fn fullness(cloud: &[Vec<f64>]) -> f64 {
    if cloud.is_empty() {
        return 0.0;
    }
    let dim = cloud[0].len();
    let mut m = DMatrix::<f64>::zeros(cloud.len(), dim);
    for (i, row) in cloud.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            m[(i, j)] = *v;
        }
    }
    let svd = m.svd(false, false);
    let mut sv: Vec<f64> = svd.singular_values.iter().cloned().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    if sv[0] == 0.0 {
        0.0
    } else {
        sv[dim - 1] / sv[0]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::source::example_surface;

    #[test]
    fn example_full_report_passes() {
        let s = example_surface(C::new(1.0, 0.0), 5);
        let rep = verify_surface(&s, 1.5, 9, &Tolerances::default(), true, 2);
        assert_eq!(rep.points_quarantined, 0);
        assert!(rep.unit_norm.pass, "{:?}", rep.unit_norm);
        assert!(rep.willmore.pass, "{:?}", rep.willmore);
        assert!(rep.isotropy.pass, "{:?}", rep.isotropy);
        assert!(rep.s_willmore_defect.pass, "{:?}", rep.s_willmore_defect);
        assert!(rep.fullness_ratio > 1e-3, "fullness {}", rep.fullness_ratio);
        assert_eq!(rep.b1_rank_mode, Some(2));
        assert!(rep.all_pass);
    }
}
