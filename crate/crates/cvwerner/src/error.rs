//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A matrix handed to a Hermitian-only routine deviates from its adjoint.
    #[error("non-Hermitian input: max |X - X†| entry {deviation:.3e} exceeds tolerance {tol:.3e}")]
    NonHermitianInput { deviation: f64, tol: f64 },

    /// An operator that must be a density matrix fails the trace or
    /// positivity requirement.
    #[error("not a quantum state: {reason}")]
    NotAState { reason: String },

    /// A scalar parameter is outside its documented range.
    #[error("parameter {name} = {value} out of range; expected {expected}")]
    ParamOutOfRange {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    /// The ratio lambda1 / lambda2^2 entering the PPT threshold is 0/0.
    #[error("degenerate threshold ratio: lambda1 = {lambda1}, lambda2 = {lambda2}")]
    DegenerateRatio { lambda1: f64, lambda2: f64 },

    /// A Fock cutoff is smaller than the truncation level it must embed.
    #[error("cutoff {cutoff} is smaller than the truncation level {n_trunc}")]
    CutoffTooSmall { cutoff: usize, n_trunc: usize },

    /// A phase multi-index has the wrong length or an out-of-range component.
    #[error("bad phase index for N = {n_levels}: {reason}")]
    BadPhaseIndex { n_levels: usize, reason: String },

    /// A kernel expected to be one-dimensional came out with another
    /// dimension; signals numerical failure of the two-level construction.
    #[error("degenerate kernel: expected dimension 1, found {dim}")]
    DegenerateKernel { dim: usize },

    /// The requested mixing weight exceeds the separability threshold, so no
    /// certificate can be produced. This is a refusal, not a claim that the
    /// state is entangled beyond what a negative partial transpose shows.
    #[error(
        "cannot certify separability: p = {p} exceeds the threshold {threshold} \
         (first failing Fock pair m = {m}, n = {n})"
    )]
    NotProvablySeparable { p: f64, threshold: f64, m: usize, n: usize },

    /// A root bracket whose endpoints evaluate to the same sign.
    #[error("no sign change on bracket [{lo}, {hi}]: delta({lo}) = {f_lo:.6e}, delta({hi}) = {f_hi:.6e}")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    /// A measurement outcome has probability zero, so its conditional state
    /// is undefined.
    #[error("degenerate outcome: probability {probability:.3e} is numerically zero")]
    DegenerateOutcome { probability: f64 },

    /// An eigensolver or other dense linear-algebra backend failure.
    #[error("linear algebra backend error: {0}")]
    Linalg(String),

    /// Malformed command-line input (grids, tolerance overrides, paths).
    #[error("invalid run configuration: {0}")]
    Config(String),

    /// I/O failure while writing a report or certificate.
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<ndarray_linalg::error::LinalgError> for Error {
    fn from(e: ndarray_linalg::error::LinalgError) -> Self {
        Error::Linalg(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
