use thiserror::Error;

/// Errors raised by state construction, solvers and convexification.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GmeError {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("state vector has norm {0:e}, too small to normalize")]
    ZeroVector(f64),
    #[error("value {value} out of range: {what}")]
    OutOfRange { what: &'static str, value: f64 },
    #[error("occupation counts sum to {actual}, expected {expected}")]
    CountMismatch { expected: usize, actual: usize },
    #[error("state too large: {0}")]
    TooLarge(String),
    #[error("mixture weights sum to {0}, expected 1")]
    WeightSumError(f64),
    #[error("party index {party} invalid for a {parties}-party system")]
    BadParty { party: usize, parties: usize },
    #[error("parameter {name} = {value} outside its legal range")]
    ParamOutOfRange { name: &'static str, value: f64 },
    #[error("unsupported shape: {0}")]
    BadShape(String),
    #[error("entanglement requires at least two parties")]
    SingleParty,
    #[error("state is not bipartite ({0} parties)")]
    NotBipartite(usize),
    #[error("state is not permutation symmetric")]
    NotSymmetric,
    #[error("Kraus operators are not trace preserving (deviation {0:e})")]
    NotTracePreserving(f64),
    #[error("state is not entangled (lambda_max = {0})")]
    NotEntangled(f64),
    #[error("symmetric state indices must differ (k1 = k2 = {0})")]
    BadIndices(usize),
    #[error("curve needs at least two points, got {0}")]
    TooFewPoints(usize),
    #[error("degenerate grid: {0}")]
    DegenerateGrid(String),
    #[error("mixture has {0} nonzero components, at most 3 supported")]
    TooManyComponents(usize),
    #[error("surface is not symmetric in r about 1/2 (deviation {0:e})")]
    SymmetryBroken(f64),
    #[error("no tangent bracket found at r = {0}")]
    NoTangent(f64),
    #[error("point ({0}, {1}) lies outside the simplex")]
    OutOfDomain(f64, f64),
    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),
    #[error("malformed state file: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, GmeError>;
