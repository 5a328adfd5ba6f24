//! Errors of the construction pipeline.

use thiserror::Error;

#[derive(Error, Debug)]
pub enum DpwError {
    #[error("potential is not polynomial: {0}")]
    NonPolynomial(String),

    #[error("iterated integrals do not terminate within window {0}: input not nilpotent-valued")]
    NonTerminating(usize),

    #[error("integration path hits a pole: {0}")]
    PoleOnPath(String),

    #[error("Iwasawa splitting failed (outside the big cell or near a pole): {0}")]
    OutsideBigCell(String),

    #[error("frame degenerate at this point: {0}")]
    DegenerateFrame(String),

    #[error("projection failed: {0}")]
    Projection(String),

    #[error(transparent)]
    Core(#[from] wll_core::CoreError),
}
