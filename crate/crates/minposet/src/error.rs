//! Error type shared by the whole crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point {point} is out of range for a poset on {n} points")]
    IndexOutOfRange { point: usize, n: usize },

    #[error("the relations contain a directed cycle")]
    Cycle,

    #[error("a poset on {n} points exceeds the supported maximum of {max}")]
    TooManyPoints { n: usize, max: usize },

    #[error("permutation acts on {got} points but the poset has {want}")]
    LengthMismatch { got: usize, want: usize },

    #[error("the image vector is not a bijection")]
    NotABijection,

    #[error("group order {order} exceeds the materialization cap {cap}")]
    CapExceeded { order: u128, cap: u64 },

    #[error("group order overflows the supported integer range")]
    OrderOverflow,

    #[error("the automorphism group (order {order}) is not cyclic")]
    NotCyclic { order: u128 },

    #[error("{0} is neither 1 nor a prime power")]
    NotPrimePower(u64),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("the two-orbit structure check applies to p = 3, 5, or 7; got {0}")]
    UnsupportedPrime(u64),

    #[error("the modulus must be positive")]
    ZeroModulus,

    #[error("cycle length {length} does not divide the modulus {modulus}")]
    LengthNotDividing { length: u64, modulus: u64 },

    #[error("cycle length {0} is shorter than 2")]
    CycleTooShort(u64),

    #[error("cycle type has lcm {lcm}, which is not the modulus {modulus}")]
    LcmMismatch { lcm: u128, modulus: u64 },

    #[error("construction requires n >= {min}, got {n}")]
    ParameterTooSmall { n: u64, min: u64 },

    #[error("enumeration is limited to {limit} points; {n} requested")]
    EnumerationLimit { n: usize, limit: usize },

    #[error("brute force is limited to {cap} points; the poset has {n}")]
    BruteForceCap { n: usize, cap: usize },

    #[error("invalid poset description: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
