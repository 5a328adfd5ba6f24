//! Surface-side verification for conformal immersions into spheres: the
//! canonical light-cone lift, structure-equation residuals, Willmore and
//! isotropy predicates, adapted moving frames, and Willmore energy
//! quadrature. Closed-form inputs are differentiated exactly through a
//! truncated Taylor-jet algebra; sampled grids use high-order finite
//! differences.

#![allow(clippy::needless_range_loop)] // index loops mirror the matrix formulas

pub mod analysis;
pub mod bivar;
pub mod energy;
pub mod frame;
pub mod grid;
pub mod jet;
pub mod report;
pub mod source;

pub use analysis::{analyze_point, AnalysisOptions, PointReport, SurfaceError};
pub use source::{closed_form_example, example_surface, round_sphere, SurfaceMap};
