use thiserror::Error;

/// Errors raised by the library. The CLI maps these to exit codes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dlog of zero")]
    ZeroArgument,
    #[error("rational function has a pole outside the declared points")]
    UncoveredPole,
    #[error("gauge matrix is singular")]
    SingularGauge,
    #[error("a singular point is sent to infinity")]
    PointAtInfinity,
    #[error("reduction failed: {0}")]
    ReductionFailed(String),
    #[error("leading matrix is singular at point {0}")]
    SingularLeadingMatrix(usize),
    #[error("leading coefficient is not invertible")]
    SingularLeading,
    #[error("bad section: {0}")]
    BadSection(String),
    #[error("constraint violated: {0}")]
    ConstraintViolated(String),
    #[error("generation failed: {0}")]
    GenerationFailed(String),
    #[error("invalid connection: {0}")]
    InvalidConnection(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
