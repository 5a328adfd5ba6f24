//! Error types shared by the exact-algebra layer.

use thiserror::Error;

#[derive(Error, Debug)]
pub enum CoreError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("index out of range: {0}")]
    IndexRange(String),

    #[error("not forward lightlike: {0}")]
    NotLightlike(String),

    #[error("not an so(1,2m-1) element: {0}")]
    NotInAlgebra(String),

    #[error("grading failed: {0}")]
    Grading(String),

    #[error("invalid canonical element: {0}")]
    Canonical(String),

    #[error("isotropy violated at column pair ({j},{l}): {value}")]
    Isotropy { j: usize, l: usize, value: String },

    #[error("degenerate builder input: {0}")]
    Degenerate(String),

    #[error("nilpotent span mismatch for {0}")]
    SpanMismatch(String),

    #[error("invalid potential file: {0}")]
    PotentialFormat(String),
}
