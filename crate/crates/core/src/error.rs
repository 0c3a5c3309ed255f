//! Crate-wide error type.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid {kind}: {reason}")]
    InvalidPoint { kind: &'static str, reason: String },

    #[error("interior point required: coordinate {index} = {value}")]
    BoundaryPoint { index: usize, value: f64 },

    #[error("finite-difference stencil left the domain at step h = {h}")]
    StencilOutOfDomain { h: f64 },

    #[error("{name} = {value} outside {bounds}")]
    OutOfDomain {
        name: &'static str,
        value: f64,
        bounds: &'static str,
    },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid generator '{name}': {reason}")]
    InvalidGenerator { name: String, reason: String },

    #[error("degenerate escort normalizer: sum of generator values = {0}")]
    DegenerateNormalizer(f64),

    #[error("map does not fix vertex {index}: gap = {gap}")]
    VertexNotFixed { index: usize, gap: f64 },

    #[error("cannot parse spec '{spec}': {reason}")]
    SpecParse { spec: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
