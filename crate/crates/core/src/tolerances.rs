//! Numerical thresholds shared across the crate.

/// Relative tolerance for positivity and orthogonality verdicts.
pub const VERDICT: f64 = 1e-9;

/// Tolerance for algebraic identities (exact up to rounding).
pub const IDENTITY: f64 = 1e-12;

/// Singular values below this fraction of the largest count as zero.
pub const RANK_RATIO: f64 = 1e-10;

/// LU pivots below this fraction of the largest mark a singular matrix.
pub const PIVOT_RATIO: f64 = 1e-12;

/// Allowed ‖m − m†‖/‖m‖ on input to the Hermitian eigensolver.
pub const HERMITIAN_INPUT: f64 = 1e-9;

/// Jacobi stops once the off-diagonal norm is below this fraction of ‖m‖.
pub const EIGEN_RESIDUAL: f64 = 1e-13;

/// Strict positivity of a (1,1)-form: λ_min > this · max(1, λ_max).
pub const STRICT_POSITIVITY: f64 = 1e-10;

/// Slack on the right-hand side of the norm-comparison inequality.
pub const INEQUALITY_SLACK: f64 = 1e-7;
