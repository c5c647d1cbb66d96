use thiserror::Error;

/// Errors raised by the bound evaluators, the random-matrix lab and the solver.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the formula.
    #[error("domain error: {0}")]
    Domain(String),

    /// `H(ρ̄δ)/δ` is not in the range of the selected rate function.
    #[error("out of range: level {level} is not in the range of W(ρ̄, ·) for {model}")]
    OutOfRange { model: &'static str, level: f64 },

    /// A quantity is undefined at this input (for instance γ with c_min ≥ 1).
    #[error("degenerate: {0}")]
    Degenerate(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Combinatorial or memory budget exceeded.
    #[error("budget exceeded: {what} needs {needed}, limit is {limit}")]
    Budget {
        what: &'static str,
        needed: f64,
        limit: f64,
    },

    #[error("matrix is not symmetric (max deviation {0:e})")]
    Asymmetric(f64),

    #[error("non-finite entries in input")]
    NonFinite,

    /// `η` is smaller than the distance from `y` to the range of the matrix.
    #[error("infeasible: dist(y, range(M)) = {distance:e} exceeds eta = {eta:e}")]
    Infeasible { distance: f64, eta: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
