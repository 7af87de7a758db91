use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid digit set: {0}")]
    InvalidDigitSet(String),

    #[error("s = {s} must exceed the convergence abscissa log_b(N) = {s0}")]
    Divergent { s: f64, s0: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The direct series cannot reach the tolerance within the word budget.
    #[error("enumeration budget of {budget} words exceeded (best error estimate {best:e})")]
    BudgetExceeded { budget: u64, best: f64 },

    /// No enumeration depth certifies the requested tolerance.
    #[error("tolerance {tol:e} infeasible by enumeration (best certified tail {best:e})")]
    InfeasibleTolerance { tol: f64, best: f64 },

    #[error("no Kempner constant stored for base {base}, digits {digits:?}")]
    MissingConstant { base: u32, digits: Vec<u32> },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("period window ({lo}, {hi}] is not covered by moments 0..={m_max}")]
    PeriodNotCovered { lo: u64, hi: u64, m_max: usize },

    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("gamma function pole or unsupported argument: {0}")]
    Pole(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
