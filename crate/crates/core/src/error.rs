use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Invalid grid, family/grid combination, or scenario parameter.
    #[error("configuration error: {0}")]
    Config(String),
    /// A value violated a structural invariant (symmetry, layout, zero mean).
    #[error("integrity error: {0}")]
    Integrity(String),
    /// An argument was outside the operation's domain.
    #[error("argument error: {0}")]
    Argument(String),
    /// Non-finite values appeared in the evolving state.
    #[error("blow-up: non-finite state at t = {t}")]
    BlowUp { t: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
