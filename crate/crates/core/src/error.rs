use crate::qmat::QmatError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Matrix(#[from] QmatError),
    #[error("support violation: {0}")]
    Support(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid function: {0}")]
    InvalidFunction(String),
    #[error("problem too large: {0}")]
    TooLarge(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("construction failed: {0}")]
    ConstructionFailed(String),
    #[error("invalid channel: {0}")]
    InvalidChannel(String),
    #[error("invalid projector: {0}")]
    InvalidProjector(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<crate::sdp::ProblemError> for Error {
    fn from(e: crate::sdp::ProblemError) -> Self {
        Error::InvalidInput(e.to_string())
    }
}

/// Accept an optimal solution, or a solve that stalled just short of the
/// requested tolerances with residuals and gap below `1e-7`.
pub fn require_optimal(sol: crate::sdp::SdpSolution, what: &str) -> Result<crate::sdp::SdpSolution> {
    use crate::sdp::Status;
    match sol.status {
        Status::Optimal => Ok(sol),
        Status::NumericalFailure
            if sol.primal_residual <= 1e-7 && sol.dual_residual <= 1e-7 && sol.gap <= 1e-7 * (1.0 + sol.objective.abs()) =>
        {
            Ok(sol)
        }
        Status::Infeasible => Err(Error::Infeasible(format!("{what}: {}", sol.certificate.unwrap_or_else(|| "no feasible point".into())))),
        Status::Unbounded => Err(Error::NumericalFailure(format!("{what}: problem reported unbounded"))),
        Status::NumericalFailure => Err(Error::NumericalFailure(format!(
            "{what}: {} after {} iterations (gap {:.2e}, residuals {:.2e}/{:.2e})",
            sol.certificate.unwrap_or_default(),
            sol.iterations,
            sol.gap,
            sol.primal_residual,
            sol.dual_residual
        ))),
    }
}
