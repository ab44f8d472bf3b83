use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid signature: r = {r}, t = {t} (need 2r + t >= 3)")]
    InvalidSignature { r: u32, t: u32 },

    #[error("invalid letter a{index}{}: {reason}", if *.inverse { "^-1" } else { "" })]
    InvalidLetter {
        index: u32,
        inverse: bool,
        reason: &'static str,
    },

    #[error("signature mismatch: {0} vs {1}")]
    SignatureMismatch(String, String),

    #[error("cannot parse word {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("no construction for d = {d}, k = {k}: {reason}")]
    NoConstruction { d: u32, k: u32, reason: String },

    #[error("budget exceeded: {what} needs {needed}, budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        budget: u128,
    },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("{quantity} is undefined: {reason}")]
    Undefined {
        quantity: &'static str,
        reason: String,
    },

    #[error("spectral solver did not converge after {iterations} sweeps (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("round cap of {cap} exceeded with {undefined} undefined vertices")]
    RoundCap { cap: usize, undefined: usize },

    #[error("truncation radius {given} leaves tail {tail:e} above tolerance {tolerance:e}; use D >= {required}")]
    TruncationTail {
        given: usize,
        required: usize,
        tail: f64,
        tolerance: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
