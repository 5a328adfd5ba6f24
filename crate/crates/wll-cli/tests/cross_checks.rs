//! Cross-module consistency: the surface-built adapted frame and the
//! pipeline's projection agree on the same geometry.

use num_complex::Complex64 as C;
use wll_dpw::loop_matrix::CMat;
use wll_dpw::pipeline::project_surface;
use wll_surface::analysis::AnalysisOptions;
use wll_surface::frame::adapted_frame_value;
use wll_surface::source::{closed_form_example, example_surface};

#[test]
fn phi_difference_of_adapted_frames_projects_to_the_surface() {
    // For a frame adapted to the surface, phi_1 - phi_2 = sqrt(2) Y is
    // forward lightlike and projects back to y.
    let lambda = C::new(1.0, 0.0);
    let surf = example_surface(lambda, 5);
    let opts = AnalysisOptions::default();
    for z in [C::new(0.4, -0.2), C::new(-0.9, 0.7), C::new(1.2, 0.5)] {
        let frame = adapted_frame_value(&surf, z, &opts)
            .unwrap()
            .map(|v| C::new(v, 0.0));
        let projected = project_surface(&frame).unwrap();
        let expect = closed_form_example(z, lambda);
        for (a, b) in projected.iter().zip(expect.iter()) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b} at {z}");
        }
    }
}

#[test]
fn degenerate_frames_are_refused() {
    // a frame whose first two columns coincide gives a zero difference
    let mut frame = CMat::identity(8, 8);
    frame.set_column(1, &frame.column(0).into_owned());
    assert!(project_surface(&frame).is_err());
}
