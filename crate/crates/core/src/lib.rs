//! Verification engine for the mixed Hodge–Riemann bilinear relations on
//! constant-coefficient forms of ℂⁿ (the complex torus model), together with
//! the mixed-volume side of the Khovanskii–Teissier correspondence.
//!
//! Layers, bottom-up:
//! - [`algebra`]: bigraded exterior algebra and dense complex linear algebra;
//! - [`kahler`]: Hermitian matrices ↔ real (1,1)-forms and positivity;
//! - [`hr`]: the mixed form `Q`, primitive subspaces, Lefschetz maps,
//!   decompositions, the associated Hermitian metric and norm constants;
//! - [`cone`]: probing (n−2,n−2)-classes at bidegree (1,1);
//! - [`convex`]: mixed volumes of boxes and zonotopes, AF/BM/KT checks;
//! - [`run`]: campaign configuration, commands and JSON reports.

pub mod algebra;
pub mod cone;
pub mod convex;
mod error;
pub mod hr;
pub mod kahler;
pub mod rng;
pub mod run;
pub mod tolerances;

pub use error::{Error, Result};
