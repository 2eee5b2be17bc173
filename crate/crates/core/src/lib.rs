//! Spectra of Dirac operators on flat pseudo-Riemannian spin manifolds.
//!
//! The crate builds gamma matrices for any signature (p,q), computes point
//! spectra of the Dirac operator on the flat tori T^{p,q} and on products
//! T^{1,1} x F from closed formulas, cross-checks them against a truncated
//! multiplication-operator oracle, and collects numerical evidence for the
//! continuous spectrum through resolvent-norm scans.

pub mod cli;
pub mod clifford;
pub mod error;
pub mod linalg;
pub mod multop;
pub mod product_spectra;
pub mod quasi_iso;
pub mod report;
pub mod symbol;
pub mod torus_spectra;

pub use error::{Error, Result};
