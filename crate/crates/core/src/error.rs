use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported polynomial degree {0} (expected 1 or 2)")]
    UnsupportedDegree(usize),

    #[error("malformed boundary: {0}")]
    MalformedBoundary(String),

    #[error("degenerate segment of length {0:e}")]
    DegenerateSegment(f64),

    #[error("domain diameter {diameter} >= 1: the single layer operator is not elliptic under this scaling")]
    ScalingViolation { diameter: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("coefficient is not symmetric positive definite at ({x}, {y})")]
    NotElliptic { x: f64, y: f64 },

    #[error("factorization failed: {0}")]
    Factorization(String),

    #[error("point ({x}, {y}) is not strictly outside the domain")]
    NotExterior { x: f64, y: f64 },

    #[error("gradient requested at the branch point of z^alpha")]
    BranchPoint,

    #[error("evaluation at the exterior pole")]
    AtPole,

    #[error("unknown data mode '{0}'")]
    UnknownDataMode(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
