use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("non-finite entry")]
    NonFinite,
    #[error("matrix is not Hermitian (asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },
    #[error("{what}: no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { what: &'static str, iterations: usize, residual: f64 },
    #[error("matrix is not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },
    #[error("singular system")]
    Singular,
    #[error("linear system has no solution (residual {residual:e})")]
    NoSolution { residual: f64 },
    #[error("stable solvent violated: spectral radius {spectral_radius} >= 1")]
    StabilityViolation { spectral_radius: f64 },
    #[error("domain error: {0}")]
    Domain(&'static str),
    #[error("Levi form is not Levi generating")]
    NotLeviGenerating,
    #[error("non-defective search failed: best distinct-eigenvalue count {best_r}, best rank {best_rank} of {k}")]
    SearchFailed { best_r: usize, best_rank: usize, k: usize },
    #[error("circle positivity unreachable for c (min eigenvalue {min_eigenvalue:e} at smallest scale)")]
    InconsistentWitness { min_eigenvalue: f64 },
    #[error("no disc variant passes the stationarity check (best defect {defect:e})")]
    ConstructionFailed { defect: f64 },
    #[error("attachment residual {residual:e} exceeds {tol:e}")]
    AttachmentFailed { residual: f64, tol: f64 },
    #[error("lift is not holomorphic after multiplying by zeta (defect {defect:e})")]
    InconsistentLift { defect: f64 },
}

impl Error {
    /// Errors that come from a numerical procedure failing, as opposed to bad input.
    pub fn is_numerical_failure(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. }
                | Error::Singular
                | Error::NoSolution { .. }
                | Error::StabilityViolation { .. }
                | Error::SearchFailed { .. }
                | Error::InconsistentWitness { .. }
                | Error::ConstructionFailed { .. }
                | Error::AttachmentFailed { .. }
                | Error::InconsistentLift { .. }
        )
    }
}
