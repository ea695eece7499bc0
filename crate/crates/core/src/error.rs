use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Returned when a state or operator would leak past the Fock truncation.
    #[error("truncation error: {0}")]
    Truncation(String),

    /// Returned when operator/state dimensions do not agree.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Returned when a qubit or mode index is out of range.
    #[error("index error: {0}")]
    Index(String),

    /// Returned when post-selection hits a branch of (near-)zero probability.
    #[error("post-selection probability {0:.3e} below threshold")]
    ZeroProbability(f64),

    /// Returned when a noise rate is too large for the configured substep.
    #[error("rate too large for substep: {0}")]
    RateTooLarge(String),

    /// Returned when a qubit fails to disentangle from the oscillator.
    #[error("entanglement residual: |<σz>| = {0:.6} below threshold {1:.6}")]
    EntanglementResidual(f64, f64),

    /// Returned when an iterative protocol hits its step cap.
    #[error("no convergence: {0}")]
    NoConvergence(String),

    /// Returned for invalid protocol parameters.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// GCR-based four-legged cat preparation requires an even aspect ratio.
    #[error("aspect ratio α/β = {0} is not an even integer")]
    AspectRatio(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
