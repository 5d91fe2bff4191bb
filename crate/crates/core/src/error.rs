use num_bigint::BigInt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no quasi-perfect class: {0}")]
    NoSolution(String),
    #[error("radicands differ: sqrt({0}) vs sqrt({1})")]
    Field(BigInt, BigInt),
    #[error("division by zero")]
    Division,
    #[error("cannot parse {0:?}")]
    Parse(String),
    #[error("degenerate: {0}")]
    Degenerate(String),
    #[error("invariant violated: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
