//! Spectra, effective Hamiltonians and gate simulation for a flux-tunable
//! transmon capacitively coupled to a Cooper-pair parity-protected qubit
//! (PPQ).
//!
//! Units: ħ = 1, energies in rad/s, times in seconds. [`units`] converts
//! from GHz and ns.
//!
//! Two-qubit conventions: the transmon factor is always on the left, and
//! the computational basis is ordered `[|1_t1_p⟩, |1_t0_p⟩, |0_t1_p⟩,
//! |0_t0_p⟩]` so that `σ^z = diag(1, −1)` acts as `+1` on the excited label.

pub mod circuit_ops;
pub mod cli;
pub mod coupled;
pub mod error;
pub mod gates;
pub mod linalg;
pub mod spectra;
pub mod sw;
pub mod units;

pub use circuit_ops::{ChargeBasis, CircuitParams, Island, Operator};
pub use error::{Error, Result};
