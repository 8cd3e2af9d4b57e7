//! Exact verification toolkit for vector bundles on projective space.
//!
//! Sheaves are presented by complexes of sums of line bundles with matrices
//! of forms over a prime field; cohomology, Chern data and the geometric
//! predicates are computed from those presentations by linear algebra.

pub mod beilinson;
pub mod catalog;
pub mod chernrr;
pub mod error;
pub mod exactfield;
pub mod freecomplex;
pub mod geomtests;
pub mod pencil24;
pub mod sheafcoh;
pub mod spectra;

pub use error::{Error, Result};
