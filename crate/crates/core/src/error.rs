use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Coarse error classes, used by the CLI to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Bad input values, failed invariants, malformed files.
    Validation,
    /// Numerical failure: infeasible or unbounded programs, degenerate fits.
    Numerical,
    /// Operating-system level I/O failure.
    Io,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("point is behind the camera (depth {depth} <= near plane {near})")]
    BehindCamera { depth: f64, near: f64 },
    #[error("mask is empty")]
    EmptyMask,
    #[error("dimension mismatch: expected {expected:?}, got {actual:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        actual: (usize, usize),
    },
    #[error("too few background correspondences: {found} (need at least 2)")]
    TooFewCorrespondences { found: usize },
    #[error("degenerate fit: all correspondences share one relative depth")]
    DegenerateFit,
    #[error("no hypothesis with positive scale was found")]
    NoPositiveScale,
    #[error("scale program is infeasible: {0}")]
    Infeasible(String),
    #[error("scale program is unbounded: {0}")]
    Unbounded(String),
    #[error("non-positive metric depth {depth} at pixel sample {index}")]
    NonPositiveDepth { index: usize, depth: f64 },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("non-positive denominator at index {index}")]
    NonPositiveDenominator { index: usize },
    #[error("ray grids differ: {left} vs {right} rays")]
    GridMismatch { left: usize, right: usize },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("format error: {0}")]
    Format(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn format(msg: impl Into<String>) -> Self {
        Error::Format(msg.into())
    }

    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::DegenerateFit
            | Error::NoPositiveScale
            | Error::Infeasible(_)
            | Error::Unbounded(_)
            | Error::NonPositiveDepth { .. } => ErrorKind::Numerical,
            Error::Io(_) => ErrorKind::Io,
            _ => ErrorKind::Validation,
        }
    }
}
