//! Error types shared across the library.

use thiserror::Error;

/// Errors produced by parsers, oracles and group arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed word or oracle-spec text; `offset` is the byte position of
    /// the offending token.
    #[error("parse error at byte {offset}: {msg}")]
    Parse { offset: usize, msg: String },

    /// The requested oracle name is not in the registry.
    #[error("unknown oracle `{0}`")]
    UnknownOracle(String),

    /// Oracle parameters are missing, unexpected, or violate a constraint.
    #[error("invalid oracle parameters: {0}")]
    InvalidOracleParams(String),

    /// The oracle restricts its domain and `n` lies outside it.
    #[error("oracle `{oracle}` is undefined at n = {n}")]
    OracleDomain { oracle: String, n: u64 },

    /// An index or exponent left the machine-representable range.
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    /// A budgeted power computation grew past its term-count cap; the final
    /// result would have at least `at_least` canonical terms.
    #[error("canonical form budget exceeded: at least {at_least} terms")]
    BudgetExceeded { at_least: usize },

    /// Generator index outside the range supported by an embedding.
    #[error("invalid generator index: {0}")]
    BadIndex(String),

    /// An empty or reversed range was requested.
    #[error("invalid range: {lo} > {hi}")]
    InvalidRange { lo: u64, hi: u64 },
}

impl Error {
    pub(crate) fn parse(offset: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            offset,
            msg: msg.into(),
        }
    }
}
