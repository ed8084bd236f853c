use thiserror::Error;

use crate::bellpoly::DeterministicStrategy;
use crate::boxspace::{BinaryVector, Rational};
use crate::nsbox::SignalingWitness;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("party counts differ: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("party count {n} outside the supported range 1..={limit}")]
    PartiesOutOfRange { n: usize, limit: usize },

    #[error("value {bits:#b} does not fit in {n} bits")]
    BitsOutOfRange { n: usize, bits: u32 },

    #[error("observer index {index} outside 1..={n}")]
    ObserverOutOfRange { index: usize, n: usize },

    #[error("malformed bitstring {0:?}")]
    MalformedBitstring(String),

    #[error("expected {expected} entries, got {actual}")]
    WrongLength { expected: usize, actual: usize },

    #[error("correlation table is incomplete: missing entry c={c}, s={s}")]
    IncompleteTable { c: BinaryVector, s: BinaryVector },

    #[error("correlation key s={s} is not contained in c={c}")]
    NotSubset { c: BinaryVector, s: BinaryVector },

    #[error("invalid box: {0}")]
    InvalidBox(String),

    #[error("box is signaling: {0}")]
    Signaling(SignalingWitness),

    #[error("not a Bell inequality: value {value} on vertex {strategy}")]
    NotAnInequality {
        strategy: DeterministicStrategy,
        value: Rational,
    },

    #[error("functional cannot be normalized: sum of coefficients is {theta}")]
    NotNormalizable { theta: Rational },

    #[error("invalid relabeling: {0}")]
    InvalidRelabeling(String),
}
