//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by ensemble validation, embedding, solving and I/O.
#[derive(Debug, Error)]
pub enum Error {
    /// A state vector or the prior vector fails its normalization tolerance.
    #[error("normalization error: {what} = {value} (expected 1 within {tol})")]
    Normalization { what: String, value: f64, tol: f64 },

    /// The subset boundary M is outside 1 <= M < N.
    #[error(
        "partition error: subset_size {subset_size} out of range for {n} states (need 1 <= M < N)"
    )]
    Partition { subset_size: usize, n: usize },

    /// States and priors have different lengths.
    #[error("length mismatch: {states} states but {priors} priors")]
    LengthMismatch { states: usize, priors: usize },

    /// The input states span more than two dimensions.
    #[error("rank error: Gram matrix has numerical rank > 2 (third-largest eigenvalue {eigenvalue:e} exceeds tolerance {tol:e})")]
    Rank { eigenvalue: f64, tol: f64 },

    /// Every state is parallel to the first one, so no orthonormal basis
    /// partner exists. The optimal strategy degenerates to guessing the
    /// subset with the larger prior weight; no measurement helps.
    #[error("degenerate basis: all states are parallel; the optimal strategy is the trivial prior-comparison guess")]
    DegenerateBasis,

    /// A state amplitude has a nonzero imaginary part where real states are required.
    #[error("state {index} is not real: imaginary component {imag:e} exceeds tolerance")]
    NotReal { index: usize, imag: f64 },

    /// An operation restricted to N = 3, M = 1 was called on another shape.
    #[error("shape error: expected 3 states with subset_size 1, got {n} states with subset_size {subset_size}")]
    Shape { n: usize, subset_size: usize },

    /// A family parameter is outside its valid interval.
    #[error("domain error: {detail}")]
    Domain { detail: String },

    /// Underlying file I/O failure.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// The input file does not match the ensemble JSON schema.
    #[error("schema error: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;
