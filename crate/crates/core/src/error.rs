use thiserror::Error;

use crate::poly::{ParseError, SubstitutionError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Substitution(#[from] SubstitutionError),
    #[error("rank must be positive")]
    ZeroRank,
    #[error("rank mismatch: {0}")]
    RankMismatch(String),
    #[error("{what} contains the variable M, which is not allowed in stored entries")]
    MuInEntry { what: String },
    #[error("the A-block is not closed under the product: {0}")]
    NotClosed(String),
    #[error("v is not invertible over Q[D]")]
    NotInvertible,
    #[error("shape violation for {kind}: {map} must vanish identically")]
    Shape { kind: String, map: String },
    #[error("base algebra is not commutative")]
    NonCommutativeBase,
    #[error("unsupported Q rank {0}; only rank 1 is supported here")]
    UnsupportedQRank(usize),
    #[error("beta must be nonzero")]
    ZeroBeta,
    #[error("grid too large: {count} candidates exceeds the cap of {cap}")]
    GridTooLarge { count: u128, cap: u128 },
    #[error("base algebra must be the trivial rank-1 algebra or Cur1")]
    UnsupportedBase,
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
