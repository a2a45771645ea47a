use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid gauge: {0}")]
    InvalidGauge(String),
    #[error("gauge is not strictly convex; the Legendre transform is not single-valued")]
    NotStrictlyConvex,
    #[error("iteration did not reach tolerance {tolerance:e} (residual {residual:e})")]
    NonConvergence { tolerance: f64, residual: f64 },
    #[error("degenerate gauge: F(u) = {value:e} for a nonzero direction")]
    DegenerateGauge { value: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("set has zero measure")]
    EmptySet,
    #[error("mesh is not closed (vector area residual {residual:e})")]
    OpenMesh { residual: f64 },
    #[error("inadmissible weight: {0}")]
    InadmissibleWeight(String),
    #[error("degenerate cone or weight: AVR = {0:e}")]
    DegenerateAvr(f64),
    #[error("containment violated: {0}")]
    Containment(String),
    #[error("profile is not nonincreasing near r = {0}")]
    NonMonotoneProfile(f64),
    #[error("convex hull failed: {0}")]
    Hull(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
