//! Unitary asymptotes of commuting tuples of matrices.
//!
//! The crate builds the universal unitary intertwining pair `(X, U)` of a
//! power-bounded commuting tuple, diagonalizes `U` jointly, decides
//! quasianalyticity and extracts hyperinvariant subspaces. Structured
//! truncations of weighted shifts and analytic Toeplitz tuples live in
//! [`models`].

pub mod analysis;
pub mod asymptote;
pub mod atomset;
pub mod error;
pub mod format;
pub mod limit;
pub mod models;
pub mod linalg;
pub mod norm_control;
pub mod quasi;
pub mod report;
pub mod reproduce;
pub mod spectral;
pub mod tuple;

pub use error::{Error, Result};
