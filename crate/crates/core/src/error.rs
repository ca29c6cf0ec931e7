use thiserror::Error;

/// Errors raised by value rings, problem plugins and the two engines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("integer overflow in {ring} ring; rerun with --ring mod:<moduli> or --ring bigint")]
    Overflow { ring: &'static str },

    #[error("ring {ring} does not support multiplication of values")]
    MulUnsupported { ring: &'static str },

    #[error("ring {ring} cannot represent negative values")]
    NegativeUnsupported { ring: &'static str },

    #[error("invalid moduli: {0}")]
    InvalidModuli(String),

    #[error("series has a constant term; it must start at exponent >= 1")]
    ConstantTerm,

    #[error("zero denominator in moment ratio at index {index}")]
    ZeroDenominator { index: u32 },

    #[error("malformed state {state}: {reason}")]
    MalformedState { state: String, reason: String },

    #[error("product term at state {state} does not fit the transfer-matrix paradigm of cumulative sums")]
    ProductTerm { state: String },

    #[error("state limit of {limit} distinct states exceeded")]
    StateLimit { limit: usize },

    #[error("group invariant violated: state {state} is a child of groups {first} and {second}")]
    GroupInvariant { state: String, first: u64, second: u64 },

    #[error("reflection requested at a kinked step (next cell {kink})")]
    KinkedReflection { kink: usize },

    #[error("size {size} is over the oracle limit {limit}")]
    OracleLimit { size: u32, limit: u32 },

    #[error("inconsistent residues: {0}")]
    InconsistentResidues(String),

    #[error("{0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
