use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("polynomial degree {found:?} is below the required minimum {min}")]
    DegreeTooLow { found: Option<usize>, min: usize },

    #[error("polynomial degree {found} exceeds the allowed maximum {max}")]
    DegreeTooHigh { found: usize, max: usize },

    #[error("no sign change on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("bisection did not reach the requested width after {iterations} halvings")]
    MaxIterExceeded { iterations: usize },

    #[error("value is not a root: residual {residual:e} exceeds {threshold:e}")]
    NotARoot { residual: f64, threshold: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("both equations are free of y; nothing to eliminate")]
    NotEliminable,

    #[error("system has infinitely many real solutions: {diagnostic}")]
    InfiniteSolutions { diagnostic: String },

    #[error("both equations are the zero polynomial")]
    BothZero,

    #[error("{count} candidate abscissas exceed the cap of {cap}")]
    CandidateOverflow { count: usize, cap: usize },

    #[error("the zero polynomial has no well-defined roots")]
    ZeroPolynomial,

    #[error("located roots account for multiplicity {found} of degree {expected}")]
    IncompleteRootSet { found: usize, expected: usize },
}
