//! Displacement mappings `Id − R` of linear nonexpansive operators on `R^n`.
//!
//! The core object is [`displacement::analyze`], which computes the fixed
//! space `D`, the operator `T` sandwiched between projectors onto `D⊥`, the
//! Moore–Penrose inverse of `Id − R` and the resolvent `J_{2T}`. The other
//! modules provide linear relations, finite-order isometries, monotonicity
//! classifiers, and verification suites that turn each identity into a
//! residual check.

pub mod cli;
pub mod displacement;
pub mod error;
pub mod gallery;
pub mod isometry;
pub mod numlin;
pub mod operators;
pub mod properties;
pub mod relations;
pub mod report;
pub mod verify;

pub use error::{Error, Result};
