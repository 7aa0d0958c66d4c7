use thiserror::Error;

use crate::subset::SubsetMask;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ground set size {0} is outside 1..=24")]
    GroundSize(usize),

    #[error("mask {mask:#b} has bits outside a ground set of {n} elements")]
    MaskOutOfRange { mask: u32, n: usize },

    #[error("setfunction value at the empty set is {0}, expected 0")]
    NotNormalized(f64),

    #[error("invalid payload: {0}")]
    InvalidPayload(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("setfunction is not submodular (witness {x}, {y})")]
    NotSubmodular { x: SubsetMask, y: SubsetMask },

    #[error("setfunction is negative at {0}")]
    Negative(SubsetMask),

    #[error("family is not a chain: {0} and {1} cross")]
    NotAChain(SubsetMask, SubsetMask),

    #[error("non-canonical interval set: {0}")]
    NonCanonical(String),

    #[error("function is not measurable for the half-open interval algebra: {0}")]
    NotMeasurable(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}
