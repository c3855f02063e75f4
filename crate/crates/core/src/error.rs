use thiserror::Error;

/// Errors raised by the solver.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument was outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A documented precondition did not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// No feasible point strictly dominates the disagreement point.
    #[error("individual-rational frontier is empty")]
    EmptyFrontier,

    /// The bargaining problem is not essential.
    #[error("bargaining problem is not essential")]
    NotEssential,

    /// The individual-rational efficient frontier has a horizontal or vertical piece,
    /// so the alternating-offer game need not have a unique equilibrium.
    #[error("bargaining problem is not regular")]
    NonRegular,

    /// A numerical routine failed to bracket or converge.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
