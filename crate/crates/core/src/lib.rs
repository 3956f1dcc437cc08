//! Exact torus-localization engine for 2-pointed quasimap invariants of the
//! Hirzebruch surface `F2`, the quantum `H*((C*)^2)`-module they define on
//! `H*(F2)`, and its comparison with the Batyrev ring.
//!
//! Everything is exact: rationals are arbitrary precision and power series
//! are truncated at an explicit total degree.

pub mod acceptance;
pub mod algebra;
pub mod batyrev;
pub mod combinatorics;
pub mod error;
pub mod invariants;
pub mod localization;
pub mod losev_manin;
pub mod par;
pub mod quantum_module;
pub mod report;
pub mod toric;

pub use error::{Error, Result};
pub use par::Exec;
pub use report::{Check, Report};
