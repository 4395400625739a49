//! Error type shared across the crate.

use crate::optim::OptimizerTrace;

/// Errors produced by oracles, optimizers, and the harness.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An input that must be finite was NaN or infinite.
    #[error("non-finite value in {context}")]
    NonFinite { context: &'static str },

    /// A scalar argument outside its admissible range.
    #[error("domain error: {0}")]
    Domain(String),

    /// Vector/matrix sizes do not line up.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Index outside `0..len`.
    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },

    /// The oracle does not support the requested operation.
    #[error("unsupported operation: {operation}")]
    Unsupported { operation: &'static str },

    /// An operation that needs at least one element got none.
    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    /// The finite-difference estimator failed to stabilize.
    #[error("finite-difference estimate did not stabilize after {shrinks} shrinks (last two estimates {previous}, {last})")]
    FdDidNotConverge {
        last: f64,
        previous: f64,
        shrinks: u32,
    },

    /// An optimizer produced a non-finite value or gradient mid-run.
    /// Carries the trace accumulated up to the failing iteration.
    #[error("run diverged at iteration {iteration}")]
    Diverged {
        iteration: usize,
        trace: Box<OptimizerTrace>,
    },

    /// A trace-level diagnostic needed retained iterates.
    #[error("trace does not retain iterates (set retain_iterates)")]
    MissingIterates,

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
