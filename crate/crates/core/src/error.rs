use thiserror::Error;

/// Errors produced by basis construction, gate application and model loading.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("invalid basis parameters: mode count {mode_count}, particle number {particle_number:?}")]
    InvalidBasis {
        mode_count: usize,
        particle_number: Option<usize>,
    },
    #[error("basis dimension {dim} exceeds limit {limit}")]
    DimensionLimit { dim: usize, limit: usize },
    #[error("mode index {index} out of range for {mode_count} modes")]
    ModeOutOfRange { index: usize, mode_count: usize },
    #[error("repeated mode index {index} in operator or gate target")]
    RepeatedIndex { index: usize },
    #[error("operator changes particle number by {delta} on a fixed-sector basis")]
    SectorMismatch { delta: i64 },
    #[error("matrix is not Hermitian: max |A - A†| = {deviation:.3e}")]
    NotHermitian { deviation: f64 },
    #[error("site {site} is not a {expected} site")]
    WrongSiteKind { site: usize, expected: &'static str },
    #[error("parameter vector length {got}, expected {expected}")]
    ParameterLength { got: usize, expected: usize },
    #[error("{0}")]
    Parse(String),
    #[error("quadrature failed to converge: residual {0:.3e}")]
    QuadratureDiverged(f64),
    #[error("{0}")]
    Invalid(String),
}

impl CoreError {
    pub fn parse(line: usize, msg: impl std::fmt::Display) -> Self {
        CoreError::Parse(format!("line {line}: {msg}"))
    }
}
