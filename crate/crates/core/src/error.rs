use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("vector of degree {degree} does not fit in ambient dimension {ambient}")]
    AmbientTooSmall { degree: usize, ambient: usize },

    #[error("index {index} is outside the system levels {min}..={max}")]
    IndexOutOfRange { index: usize, min: usize, max: usize },

    #[error("limit elements belong to different directed systems")]
    SystemMismatch,

    #[error("cone condition violated: psi_{j} . eps_{i}{j} != psi_{i} on sample #{sample}")]
    ConeConditionViolated { i: usize, j: usize, sample: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("matrix is numerically singular (pivot {pivot:e} below threshold {threshold:e})")]
    NumericallySingular { pivot: f64, threshold: f64 },

    #[error("point is outside the chart domain: {0}")]
    OutsideChartDomain(String),

    #[error("vector is not orthogonal to the chart pole (<y, a> = {0})")]
    NotInPerp(String),

    #[error("point is not on the unit sphere (<x, x> = {0})")]
    NotOnSphere(String),

    #[error("cannot push level {from} down to level {to}")]
    LevelDecrease { from: usize, to: usize },

    #[error("evaluation failed: {0}")]
    EvaluationFailure(String),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("unknown tower `{0}`")]
    UnknownTower(String),

    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),

    #[error("parse error: {0}")]
    Parse(String),
}
