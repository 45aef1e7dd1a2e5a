use thiserror::Error;

use crate::limit::LimitOperator;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrices {i} and {j} do not commute (relative residual {residual:.3e})")]
    NonCommuting { i: usize, j: usize, residual: f64 },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },
    #[error("factor {0} is singular")]
    SingularFactor(usize),
    #[error("matrix is singular")]
    Singular,

    #[error("Cesaro means diverge (checkpoint {checkpoint}, difference {diff:.3e})")]
    Diverging { checkpoint: usize, diff: f64 },
    #[error("tolerance not reached within the horizon (last difference {:.3e})", .best.residual)]
    HorizonExhausted { best: Box<LimitOperator> },
    #[error("unimodular joint eigenvalue with a nontrivial Jordan block (defect {defect:.3e})")]
    NonSemisimpleUnimodular { defect: f64 },
    #[error("spectral decomposition failed: {0}")]
    DecompositionFailed(String),

    #[error("matrix is not in the commutant (residual {residual:.3e})")]
    NotInCommutant { residual: f64 },
    #[error("commutant image is not unique (rank defect {defect})")]
    NonUnique { defect: usize },
    #[error("intertwiner is zero")]
    ZeroX,
    #[error("no factorization between the asymptotes (residual {residual:.3e})")]
    NoFactorization { residual: f64 },
    #[error("matrix does not intertwine (residual {residual:.3e})")]
    NotIntertwining { residual: f64 },

    #[error("U_{0} is not unitary")]
    NotUnitary(usize),
    #[error("joint eigenvalue clusters are ambiguous (separation {separation:.3e})")]
    ClusterAmbiguity { separation: f64 },
    #[error("space has dimension zero")]
    EmptySpace,
    #[error("atom sets belong to different measures")]
    MeasureMismatch,

    #[error("quasianalyticity criteria disagree: {0}")]
    CriteriaDisagree(String),
    #[error("pullback is not invariant under the commutant (residual {residual:.3e})")]
    InvarianceCheckFailed { residual: f64 },
    #[error("tuple is quasianalytic")]
    IsQuasianalytic,
    #[error("no splitting atom found")]
    NoSplittingAtom,
    #[error("intertwiner is not injective (smallest singular value {sigma:.3e})")]
    NotInjective { sigma: f64 },

    #[error("window radius {0} is too small")]
    WindowTooSmall(usize),
    #[error("measure hypothesis violated: {0}")]
    MeasureHypothesisViolated(String),
    #[error("outer series not converged (epsilon {eps:.3e})")]
    SeriesNotConverged { eps: f64 },
    #[error("vector is zero")]
    ZeroVector,

    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("unknown example {0}")]
    UnknownExample(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors that signal a broken numerical invariant rather than bad input.
    pub fn is_invariant_violation(&self) -> bool {
        matches!(
            self,
            Error::CriteriaDisagree(_)
                | Error::InvarianceCheckFailed { .. }
                | Error::NonUnique { .. }
                | Error::ClusterAmbiguity { .. }
                | Error::DecompositionFailed(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
