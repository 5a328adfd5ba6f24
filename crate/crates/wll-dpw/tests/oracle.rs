//! End-to-end oracle on a moderate grid: the constructed family must land on
//! the closed form after the allowed block-rotation fit.

use num_complex::Complex64 as C;
use wll_dpw::{verify_example, GridSpec};

#[test]
fn oracle_on_moderate_grid() {
    let grid = GridSpec {
        res: 9,
        radius: 1.2,
        disk: true,
    };
    let lambdas = [C::new(1.0, 0.0), C::new(0.0, 1.0)];
    let rep = verify_example(&grid, &lambdas).unwrap();
    assert_eq!(rep.summary.points_quarantined, 0);
    assert!(
        rep.overall_max_deviation < 1e-10,
        "deviation {:?}",
        rep.max_deviation
    );
    assert!(rep.gram_spectrum_distance < 1e-10);
    assert!(rep.summary.max_reality_defect < 1e-10);
    assert!(rep.summary.max_group_defect < 1e-10);
    assert_eq!(rep.summary.max_twist_defect, 0.0);
    assert!(rep.summary.mc_exact && rep.summary.membership_exact && rep.summary.twisting_exact);
}
