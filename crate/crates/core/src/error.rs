use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A grid or cutoff cannot represent the requested data.
    #[error("resolution error: {0}")]
    Resolution(String),

    /// A structural assumption on the generator does not hold.
    #[error("hypothesis violation: {0}")]
    HypothesisViolation(String),

    #[error("invalid system: {0}")]
    InvalidSystem(String),

    #[error("not converged under doubling: coarse {coarse:.6e}, fine {fine:.6e}, relative change {rel_change:.3e}")]
    Convergence {
        coarse: f64,
        fine: f64,
        rel_change: f64,
    },

    #[error("configuration error:\n  {}", .0.join("\n  "))]
    Config(Vec<String>),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short machine-readable class name, used in result rows.
    pub fn class(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid-argument",
            Error::Resolution(_) => "resolution",
            Error::HypothesisViolation(_) => "hypothesis-violation",
            Error::InvalidSystem(_) => "invalid-system",
            Error::Convergence { .. } => "convergence",
            Error::Config(_) => "config",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
        }
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
