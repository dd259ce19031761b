use thiserror::Error;

/// Errors raised by the algebra, engine and campaign layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("ambient dimension {n} is outside the supported range 1..={max}")]
    DimensionOutOfRange { n: usize, max: usize },
    #[error("bidegree ({p},{q}) is invalid for ambient dimension {n}")]
    BidegreeOutOfRange { n: usize, p: usize, q: usize },
    #[error("ambient dimensions differ: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },
    #[error("expected bidegree ({expected_p},{expected_q}), found ({found_p},{found_q})")]
    BidegreeMismatch {
        expected_p: usize,
        expected_q: usize,
        found_p: usize,
        found_q: usize,
    },
    #[error(
        "shape mismatch: expected {expected_rows}x{expected_cols}, found {found_rows}x{found_cols}"
    )]
    ShapeMismatch {
        expected_rows: usize,
        expected_cols: usize,
        found_rows: usize,
        found_cols: usize,
    },
    #[error("matrix is not Hermitian (relative residual {residual:e})")]
    NotHermitian { residual: f64 },
    #[error("matrix is singular to tolerance (pivot ratio {ratio:e})")]
    Singular { ratio: f64 },
    #[error("eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("(1,1)-form is not real (residual {residual:e})")]
    NotReal { residual: f64 },
    #[error("tuple entry {index} is not strictly positive (min eigenvalue {min_eigenvalue:e})")]
    NotStrictlyPositive { index: usize, min_eigenvalue: f64 },
    #[error("Kähler tuple has length {found}, expected {expected}")]
    TupleLength { expected: usize, found: usize },
    #[error("arity mismatch: {0}")]
    Arity(String),
    #[error("candidate class is zero")]
    ZeroCandidate,
    #[error("constant is not finite and positive: {0}")]
    DegenerateConstant(String),
    #[error("invalid convex body: {0}")]
    InvalidBody(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
