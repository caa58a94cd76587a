use thiserror::Error;

use crate::expr::{EvalError, ParseError};
use crate::jet::Complex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error(transparent)]
    Eval(#[from] EvalError),

    /// A contour or region description that violates its invariants.
    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    /// Line integrals cannot skip nodes; any failure is fatal.
    #[error("evaluation failed at quadrature node {index} (z = {point}): {source}")]
    NodeEvaluation {
        index: usize,
        point: Complex,
        #[source]
        source: EvalError,
    },

    #[error("too many non-evaluable sample points: {skipped} of {total} skipped (limit {limit})")]
    ExcessiveSkips {
        skipped: usize,
        total: usize,
        limit: usize,
    },

    #[error("point {point} lies on the contour (distance {distance:e})")]
    PointOnContour { point: Complex, distance: f64 },

    #[error("point {point} is not strictly inside the region: {reason}")]
    Placement { point: Complex, reason: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
