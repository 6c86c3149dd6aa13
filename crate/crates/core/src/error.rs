//! Error type shared by all modules.

use thiserror::Error;

/// Errors surfaced by the numerical routines.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An adaptive quadrature exhausted its evaluation budget before meeting
    /// its tolerance.
    #[error("quadrature did not converge within {budget} evaluations (estimated relative error {estimate:.3e})")]
    QuadratureBudget { budget: usize, estimate: f64 },

    /// Successive truncation-radius halvings failed to contract fast enough.
    #[error("epsilon refinement stalled: observed contraction ratio {observed:.4} below required {required:.4}")]
    RefinementStall { observed: f64, required: f64 },

    /// Vector or matrix dimensions do not match.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// The cyclic Jacobi eigensolver exhausted its sweep budget.
    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_diagonal:.3e})")]
    EigenSweepBudget { sweeps: usize, off_diagonal: f64 },

    /// Conjugate gradients exhausted its iteration budget.
    #[error("conjugate gradients did not reach tolerance after {iterations} iterations (relative residual {residual:.3e})")]
    CgBudget { iterations: usize, residual: f64 },

    /// A resolvent was requested too close to the spectrum.
    #[error("resolvent evaluated within {distance:.3e} of the spectrum")]
    SingularResolvent { distance: f64 },

    /// Nested-grid checks require aligned grids.
    #[error("grids are not aligned: {0}")]
    GridAlignment(String),

    /// A parameter violates a module precondition.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
