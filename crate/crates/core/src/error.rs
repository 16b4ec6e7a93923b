use thiserror::Error;

/// Errors raised by sequence generation, correlation, optimisation and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sequence length must be at least 1")]
    EmptySequence,

    #[error("sequence lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("lag {lag} outside [0, {n})")]
    LagOutOfRange { lag: i64, n: usize },

    /// The two phases coincide modulo 1. `limit` carries the removable-singularity
    /// value of |C| (that is `N - l`); the crosscorrelation bound is infinite here.
    #[error("phases coincide modulo 1 (|C| limit = {limit})")]
    DegeneratePhase { limit: f64 },

    #[error("slot {sigma} outside [0, {k_max})")]
    InvalidSlot { sigma: usize, k_max: usize },

    #[error("{0} is not a power of two of the form 2^m with m > 1")]
    NotPowerOfTwo(usize),

    #[error("code index {index} outside family of size {family_size}")]
    CodeIndexOutOfRange { index: usize, family_size: usize },

    #[error(
        "no preferred pair is baked in for register degree {0}; supply polynomials explicitly"
    )]
    UnsupportedDegree(u32),

    #[error("polynomial {poly:#x} does not generate a maximal-length sequence of degree {degree}")]
    NotPrimitive { poly: u32, degree: u32 },

    #[error("non-finite value: {0}")]
    NonFinite(&'static str),

    #[error("need at least {min} users, got {k}")]
    TooFewUsers { k: usize, min: usize },

    #[error("users {0} and {0} coincide; interference is defined for distinct users")]
    SameUser(usize),

    #[error("slots must be pairwise distinct")]
    DuplicateSlots,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
