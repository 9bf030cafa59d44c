use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("budget exceeded: {what} = {requested} > {limit}")]
    Budget {
        what: &'static str,
        requested: u64,
        limit: u64,
    },

    #[error("factorization of {0} did not finish within the iteration budget")]
    FactorizationBudget(u64),

    #[error("table covers [{lo}, {hi}] but [{need_lo}, {need_hi}] is required")]
    Coverage {
        lo: u64,
        hi: u64,
        need_lo: u64,
        need_hi: u64,
    },

    #[error("parameter window violated: {0}")]
    Window(String),

    #[error("coefficient {index} has modulus {modulus} > 1")]
    Unbounded { index: usize, modulus: f64 },

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Short machine-readable tag, used in CLI error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Budget { .. } => "budget",
            Error::FactorizationBudget(_) => "factorization_budget",
            Error::Coverage { .. } => "coverage",
            Error::Window(_) => "window",
            Error::Unbounded { .. } => "unbounded",
            Error::Overflow(_) => "overflow",
            Error::Infeasible(_) => "infeasible",
            Error::Parse(_) => "parse",
        }
    }
}
