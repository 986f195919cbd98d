//! Truncated continuous-variable Werner states: PPT structure, explicit
//! separable decompositions, and measurement-dependent quantum discord.
//!
//! The crate is organized as a library with one thin command-line front end.
//! Start with the runnable examples:
//!
//! ```bash
//! cargo run --release --example boundary_decomposition
//! cargo run --release --example ppt_scan
//! cargo run --release --example separable_certificate
//! cargo run --release --example kraus_two_level
//! cargo run --release --example convergence
//! cargo run --release --example discord_crossover
//! ```
//!
//! Modules:
//! - [`operators`]: dense Fock-space operators, partial transpose/trace,
//!   Hermitian spectra, trace norm, von Neumann entropy.
//! - [`werner`]: state constructors and analytic PPT thresholds.
//! - [`separability`]: phase-vector product decompositions, certificates,
//!   and the trace-norm convergence law.
//! - [`discord`]: photon-counting versus phase-vector POVM discord and the
//!   crossover threshold.
//! - [`verify`]: the named residual checks behind `cvwerner verify`.
//! - [`cli`]: the command implementations behind the binary.

pub mod cli;
pub mod discord;
pub mod error;
pub mod operators;
pub mod report;
pub mod separability;
pub mod verify;
pub mod werner;

pub use error::{Error, Result};
