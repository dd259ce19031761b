//! The mixed Hodge–Riemann form and everything built on it.

mod constants;
mod context;
mod metric;
mod primitive;

pub use constants::{
    inequality_sides, timorin_constants, verify_timorin_inequality, InequalityReport,
    TimorinConstants,
};
pub use context::{make_context, sign_factor, HRContext, LefschetzReport, SignConvention};
pub use metric::{hr_metric, iterated_decompose, tilde, DecompositionChain, DecompositionTerm};
pub use primitive::{
    gram_on_primitive, primitive_basis, primitive_decompose, theorem_c_check, GramReport,
    PrimitiveDecomposition, PrimitiveSpace, Splitter, TheoremCReport, Verdict,
};
