use std::fmt;

/// Which inequality of the time-step restriction limits `dt`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CflBinding {
    /// `(1 - theta) dt [M / k^2 - c] <= tau`, the explicit part.
    Explicit,
    /// `theta dt c <= tau`, the implicit part.
    Implicit,
}

impl fmt::Display for CflBinding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CflBinding::Explicit => write!(f, "explicit condition (1-theta)*dt*(M/k^2 - c) <= tau"),
            CflBinding::Implicit => write!(f, "implicit condition theta*dt*c <= tau"),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("CFL violation, {binding}: dt = {dt:.6e} exceeds the admissible {max_dt:.6e}")]
    Cfl {
        binding: CflBinding,
        dt: f64,
        max_dt: f64,
    },

    #[error("solvability condition 2*theta*dt*c+ <= tau violated: dt = {dt:.6e}, sup(c+) = {c_plus:.6e}")]
    Solvability { dt: f64, c_plus: f64 },

    #[error("Howard iteration did not converge in {iterations} iterations; residual history {history:?}")]
    HowardNonConvergence { iterations: usize, history: Vec<f64> },

    #[error("linear solver stalled after {iterations} iterations at residual {residual:.3e} (target {target:.3e})")]
    LinearSolve {
        iterations: usize,
        residual: f64,
        target: f64,
    },

    #[error("unknown problem `{0}`")]
    UnknownProblem(String),

    #[error("unknown stencil variant `{0}`")]
    UnknownVariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Numeric failures (as opposed to bad input) map to exit code 1 in the CLI.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::Cfl { .. }
                | Error::Solvability { .. }
                | Error::HowardNonConvergence { .. }
                | Error::LinearSolve { .. }
        )
    }
}

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}
