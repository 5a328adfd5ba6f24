//! Exact machinery for the loop-group classification of Willmore two-spheres:
//! Lorentz-Minkowski linear algebra, the complex orthogonal algebra
//! so(1,2m-1,C) with its torus gradings, canonical elements with their
//! nilpotent subalgebras, and nilpotent normalized potentials with exact
//! isotropy checks over Q(i).

#![allow(clippy::needless_range_loop)] // index loops mirror the matrix formulas

pub mod canonical;
pub mod errors;
pub mod lie;
pub mod mat;
pub mod minkowski;
pub mod poly;
pub mod potential;
pub mod quad;
pub mod ratfun;
pub mod scalar;

pub use errors::CoreError;
pub use scalar::{FieldElem, GaussRational, Scalar};
