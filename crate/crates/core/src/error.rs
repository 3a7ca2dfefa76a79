use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown quiver type `{0}`; admissible labels are A<n> (n >= 1), D<n> (n >= 4), E6, E7, E8")]
    InvalidType(String),

    #[error("quiver is already doubled")]
    AlreadyDoubled,

    #[error("operation requires an undoubled quiver")]
    Doubled,

    #[error("vector has length {got}, expected {expected}")]
    Length { expected: usize, got: usize },

    #[error("parameter must satisfy lambda . delta = 1 (got {0})")]
    NotNormalized(String),

    #[error("weight is not in the lattice Lambda: xi . delta = {0}")]
    NotInLambda(i64),

    #[error("parameter is not regular: a Dynkin root pairs to zero")]
    NotRegular,

    #[error("cannot parse rational `{0}`")]
    ParseRational(String),

    #[error("unknown group `{0}`; expected Z<n> (n >= 1) or BD<4n> (n >= 2)")]
    InvalidGroup(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("resource ceiling exceeded: {what} = {size} > {limit}")]
    ResourceLimit { what: &'static str, size: usize, limit: usize },

    #[error("missing multiplication data for degrees ({0}, {1})")]
    MissingMultiplication(usize, usize),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
