use thiserror::Error;

/// Violated metric axiom, carrying the offending indices.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricViolation {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("non-finite distance at ({0}, {1})")]
    NonFinite(usize, usize),
    #[error("nonzero self-distance at {0}")]
    NonzeroDiagonal(usize),
    #[error("asymmetric distance between {0} and {1}")]
    Asymmetry(usize, usize),
    #[error("negative distance between {0} and {1}")]
    NegativeDistance(usize, usize),
    #[error("distinct points {0} and {1} at distance zero")]
    ZeroDistance(usize, usize),
    #[error("triangle inequality fails: d({0},{2}) > d({0},{1}) + d({1},{2})")]
    TriangleViolation(usize, usize, usize),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("input is not Hermitian (defect {defect:.3e})")]
    NonHermitianInput { defect: f64 },
    #[error("Jacobi iteration did not converge within {sweeps} sweeps")]
    ConvergenceFailure { sweeps: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid metric: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidMetric(Vec<MetricViolation>),
    #[error("sets do not cover the space (point {point} uncovered)")]
    NotACover { point: usize },
    #[error("invalid cover: {0}")]
    CoverInvalid(String),
    #[error("empty box")]
    EmptyBox,
    #[error("element is outside the seminorm domain: {0}")]
    DomainMismatch(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("linear program infeasible")]
    LpInfeasible,
    #[error("linear program unbounded")]
    LpUnbounded,
    #[error("primal/dual gap {gap:.3e} exceeds {limit:.3e}")]
    GapExceeded { gap: f64, limit: f64 },
    #[error("unsupported component seminorm: {0}")]
    UnsupportedComponentSeminorm(String),
    #[error("trial budget must be positive")]
    BudgetZero,
    #[error("bump supports are not {radius}-disjoint (bumps {first} and {second})")]
    SupportsNotDisjoint { first: usize, second: usize, radius: f64 },
    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("cutoff {cutoff} out of range for ray of length {len}")]
    CutoffOutOfRange { cutoff: usize, len: usize },
    #[error("not a state: {0}")]
    NotAState(String),
    #[error("invalid Fourier profile: {0}")]
    ProfileInvalid(String),
    #[error("width must be positive, got {0}")]
    NonpositiveWidth(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
