use thiserror::Error;

/// Errors raised by constructors and simulations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the documented domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
    /// The state does not fit under the requested cutoff.
    #[error("truncation error: tail mass {tail:e} beyond cutoff {cutoff} exceeds tolerance {tol:e}")]
    Truncation {
        /// Probability mass beyond the cutoff.
        tail: f64,
        /// The offending cutoff.
        cutoff: usize,
        /// The tolerance in force.
        tol: f64,
    },
    /// A superposition cancelled to the zero vector (e.g. the odd cat at α = 0).
    #[error("degenerate state: {0}")]
    Degenerate(&'static str),
    /// The requested mean photon number cannot be reached.
    #[error("infeasible target: mean photon number {target} is below the floor {floor}")]
    InfeasibleTarget {
        /// Requested value.
        target: f64,
        /// Smallest reachable value.
        floor: f64,
    },
    /// Shapes or mode counts disagree.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(&'static str),
}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
