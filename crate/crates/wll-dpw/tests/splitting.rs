//! Splitting behavior beyond the main oracle: already-real loops, seed
//! robustness, and the numeric integration path for meromorphic potentials.

use nalgebra::DMatrix;
use num_complex::Complex64 as C;
use wll_core::poly::Poly;
use wll_core::potential::{assemble, ColumnPair, RF};
use wll_core::ratfun::RatFun;
use wll_core::scalar::{GaussRational, Scalar};
use wll_dpw::iwasawa::{iwasawa_at_point, IwasawaSeed};
use wll_dpw::loop_matrix::{CMat, LoopMatrix};
use wll_dpw::pipeline::run_pipeline;
use wll_dpw::{integrate_potential, GridSpec};

fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

#[test]
fn already_real_loop_splits_as_itself() {
    // a constant real rotation (block-diagonal, in the identity component)
    // is its own real factor; the normalized positive factor is trivial
    let dim = 8;
    let mut r = DMatrix::<C>::identity(dim, dim);
    let (c, s) = (0.6f64.cos(), 0.6f64.sin());
    // spatial rotation inside the first block
    r[(1, 1)] = C::new(c, 0.0);
    r[(1, 2)] = C::new(-s, 0.0);
    r[(2, 1)] = C::new(s, 0.0);
    r[(2, 2)] = C::new(c, 0.0);
    // rotation in the normal block
    r[(5, 5)] = C::new(c, 0.0);
    r[(5, 6)] = C::new(-s, 0.0);
    r[(6, 5)] = C::new(s, 0.0);
    r[(6, 6)] = C::new(c, 0.0);
    let f_minus = LoopMatrix {
        k_min: 0,
        coeffs: vec![r.clone()],
    };
    let seed = IwasawaSeed::identity(dim, 0);
    let res = iwasawa_at_point(&f_minus, &seed).unwrap();
    let fp0 = res.f_plus.eval(C::new(1.0, 0.0));
    assert!(
        max_abs(&(fp0 - CMat::identity(dim, dim))) < 1e-9,
        "positive factor should normalize to the identity"
    );
    let f1 = res.frame.eval(C::from_polar(1.0, 1.1));
    assert!(max_abs(&(f1 - r)) < 1e-9, "frame should be the loop itself");
}

#[test]
fn splitting_is_unique_under_perturbed_seeds() {
    let p = wll_core::potential::example_potential();
    let frame = integrate_potential(&p, &GaussRational::from_int(0)).unwrap();
    let z = C::new(0.6, -0.4);
    let fm = frame.eval(z);
    let base = iwasawa_at_point(&fm, &IwasawaSeed::identity(8, 2)).unwrap();
    // perturb the seed noticeably and re-solve
    let mut seed = IwasawaSeed::identity(8, 2);
    for (i, b) in seed.b.iter_mut().enumerate() {
        for r in 0..8 {
            for c in 0..8 {
                let off = (r < 4) != (c < 4);
                if off == (i % 2 == 1) {
                    b[(r, c)] += C::new(0.05 * ((r + c + i) as f64).sin(), 0.03);
                }
            }
        }
    }
    let other = iwasawa_at_point(&fm, &seed).unwrap();
    for l in [C::new(1.0, 0.0), C::from_polar(1.0, 2.0)] {
        let d = base.frame.eval(l) - other.frame.eval(l);
        assert!(
            max_abs(&d) < 1e-8,
            "frames differ by {} at lambda {l}",
            max_abs(&d)
        );
    }
}

fn first_kind_pair(h1: RF, h1hat: RF, h3: RF, h3hat: RF) -> ColumnPair {
    ColumnPair::KindI { h1, h1hat, h3, h3hat }
}

#[test]
fn type_one_potential_runs_exactly() {
    // all-kind-i potential of generic rank 2: the surface ray is the
    // constant lightlike direction of the column plane
    let z = RF::var();
    let p = assemble(vec![
        first_kind_pair(RF::one(), z.clone(), z.clone(), RF::one()),
        first_kind_pair(z.clone(), RF::zero(), RF::one(), z.clone()),
    ])
    .unwrap();
    assert_eq!(p.type_tag, Some(1));
    let grid = GridSpec {
        res: 4,
        radius: 0.5,
        disk: false,
    };
    let run = run_pipeline(&p, &grid, &[C::new(1.0, 0.0)]).unwrap();
    assert_eq!(run.summary.points_quarantined, 0, "{:?}", run.quarantined);
    assert!(run.summary.mc_exact && run.summary.membership_exact);
    // all-kind-i potentials take values in a height-2 nilpotent part, so the
    // iterated integrals stop at lambda^{-2}
    assert!(run.summary.frame_window <= 2, "window {}", run.summary.frame_window);
    for s in &run.samples {
        let n: f64 = s.point.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!((n - 1.0).abs() < 1e-9);
    }
}

#[test]
fn rational_potential_uses_the_numeric_path() {
    // a pole at z = 2; the grid stays well inside
    let den = Poly::new(vec![GaussRational::from_int(-2), GaussRational::from_int(1)]);
    let f = RatFun::new(Poly::one(), den);
    let z = RF::var();
    let p = assemble(vec![
        first_kind_pair(f.clone(), z.clone(), z.clone(), RF::one()),
        first_kind_pair(z.clone(), RF::one(), f, z.clone()),
    ])
    .unwrap();
    assert_eq!(p.poles.len(), 1);
    let grid = GridSpec {
        res: 3,
        radius: 0.4,
        disk: false,
    };
    let run = run_pipeline(&p, &grid, &[C::new(1.0, 0.0)]).unwrap();
    assert_eq!(run.summary.points_quarantined, 0, "{:?}", run.quarantined);
    assert!(run.summary.max_reality_defect < 1e-10);
    assert!(run.summary.max_group_defect < 1e-10);
    for s in &run.samples {
        let n: f64 = s.point.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!((n - 1.0).abs() < 1e-8);
    }
    // a grid reaching the pole is refused pointwise, not fatally
    let wide = GridSpec {
        res: 3,
        radius: 2.0,
        disk: false,
    };
    let run = run_pipeline(&p, &wide, &[C::new(1.0, 0.0)]).unwrap();
    assert!(run.summary.points_quarantined > 0);
    assert!(run
        .quarantined
        .iter()
        .any(|q| q.reason.contains("pole")));
}
