use thiserror::Error;

use crate::tree::Pair;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("pair ({}, {}) is not coprime", .0.a, .0.b)]
    NotCoprime(Pair),

    #[error("pair ({}, {}) is degenerate; counting needs both entries positive", .0.a, .0.b)]
    DegeneratePair(Pair),

    #[error("depth {depth} exceeds the enumeration cap of {cap} branches")]
    DepthCapExceeded { depth: u32, cap: u32 },

    #[error("backward reduction of ({}, {}) did not reach (1, 1) within {budget} steps", .pair.a, .pair.b)]
    ReductionBudget { pair: Pair, budget: u64 },

    #[error("shortest walk to ({}, {}) has {len} branches; at least 3 are required", .pair.a, .pair.b)]
    ChainTooShort { pair: Pair, len: usize },

    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),

    #[error("unknown certificate id `{0}`")]
    UnknownCertificate(String),

    #[error("identity `{name}` is not defined at n = {n}")]
    IdentityOutOfRange { name: &'static str, n: usize },

    #[error("probability {0} is outside [0, 1]")]
    BadProbability(f64),

    #[error("{0}")]
    InvalidParams(String),

    #[error("series check needs 1/3 < p < 1, got {0}")]
    SeriesDomain(f64),

    #[error("series did not reach its tail tolerance within {terms} terms")]
    SeriesTruncated { terms: usize },

    #[error("interval width target not met at the {cap}-bit precision cap")]
    PrecisionCap { cap: u32 },

    #[error("cache: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;
