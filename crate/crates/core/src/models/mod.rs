//! Truncated infinite-dimensional models: weighted shifts, analytic Toeplitz
//! tuples with arc-set invariants, and the doubled shift without an asymptote.

pub mod arcs;
pub mod nonexistence;
pub mod shift;
pub mod toeplitz;

pub use arcs::ArcSet;
pub use nonexistence::{nonexistence_diagnostic, NonexistenceReport};
pub use shift::{build_weighted_shift, WeightedShiftModel};
pub use toeplitz::{
    ac_quasianalytic_check, ac_residual_sets, build_toeplitz_model, build_toeplitz_tuple, HardyToeplitzModel,
    ToeplitzParams,
};
