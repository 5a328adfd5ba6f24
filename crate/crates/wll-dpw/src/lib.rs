//! The finite-uniton construction pipeline: exact integration of nilpotent
//! normalized potentials to meromorphic loop frames, pointwise numerical loop
//! Iwasawa splitting into real extended frames, and projection to surfaces in
//! the sphere, with the closed-form oracle for the explicit example.

pub mod errors;
pub mod frame_series;
pub mod iwasawa;
pub mod loop_matrix;
pub mod pipeline;

pub use errors::DpwError;
pub use frame_series::{integrate_numeric, integrate_potential, ExactFrame};
pub use iwasawa::{iwasawa_at_point, IwasawaResult, IwasawaSeed};
pub use loop_matrix::LoopMatrix;
pub use pipeline::{run_pipeline, verify_example, GridSpec, PipelineRun};
