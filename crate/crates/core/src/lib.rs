//! Wirtinger-calculus workbench for structural holomorphic functions.
//!
//! Functions `w(z)` and structural functions `K(z)` are parsed expressions in
//! `z` and `conj(z)`. They are differentiated exactly with Wirtinger jets,
//! integrated over contours and regions, and run through executable versions
//! of the Cauchy, Green, Pompeiu, Morera, Liouville and maximum-modulus
//! theorems. Every check produces a [`report::CheckReport`].

pub mod area;
pub mod cli;
pub mod contour;
pub mod error;
pub mod expr;
pub mod fd;
pub mod jet;
pub mod quad;
pub mod render;
pub mod report;
pub mod theorems;

pub use error::{Error, Result};
pub use expr::{parse, Expr};
pub use jet::{Complex, Jet};
pub use report::CheckReport;
