//! Exact homological algebra over ZZ, QQ, prime fields and Laurent
//! polynomial rings: cochain complexes, mapping cones, double-complex
//! windows with their totalisations, mapping tori, and acyclicity
//! certificates over the two Novikov-style series completions.
//!
//! All arithmetic is exact (big integers, rationals, modular residues,
//! Laurent polynomials); nothing here floats. Fallible constructors return
//! [`Error`]; arithmetic on values that already passed validation panics on
//! internal invariant violations instead of threading `Result` everywhere.

pub mod bicomplex;
pub mod complexes;
pub mod gen;
pub mod json;
pub mod linalg;
pub mod novikov;
pub mod rings;
pub mod suites;

mod error;
mod par;

pub use error::{Error, Result};
