use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter lies outside the range its theorem admits.
    #[error("parameter {name} = {value} is outside {range}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    /// An argument lies outside the domain where a function or series is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// Endpoint probing found no sign change.
    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    NoRoot { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    /// A function evaluation produced a non-finite value.
    #[error("non-finite value {value} at x = {x}")]
    Numerical { x: f64, value: f64 },

    /// The requested check is outside the regime where it is claimed.
    #[error("not applicable: {0}")]
    NotApplicable(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
