//! Effective Hamiltonians: numerical direct rotation, second-order analytic
//! Schrieffer–Wolff and the time-dependent corrections in the rotating
//! frame.

mod analytic;
mod numeric;
mod pauli;
mod timedep;

pub use analytic::{
    analytic_coefficients, analytic_effective_hamiltonian, error_coupling_coefficients,
    error_coupling_coefficients_full, static_generator, AnalyticCoefficients, ErrorCouplings,
    LowEnergyBlocks, RESONANCE_RATIO, VALIDITY_RATIO,
};
pub use numeric::{
    direct_rotation, numerical_sw, product_sw, NumericSw, Selection, MIN_SINGULAR_VALUE,
};
pub use pauli::{pauli_coefficients, pauli_string, Pauli, PauliCoefficients, PAULIS};
pub use timedep::{
    corrected_rotating_hamiltonian, lab_effective_hamiltonian, rotating_model,
    rwa_corrected_coefficients, CorrectionForm, RotatingCouplings, RwaVariant,
    TimeDependentGenerator, ZChannels,
};

use serde::Serialize;

use crate::coupled::QubitLabel;
use crate::linalg::CMatrix;

/// Where an [`EffectiveHamiltonian`] came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Numeric,
    /// Second order at n_g,p = 0: Z-type couplings only.
    AnalyticZeroOffset,
    /// Second order at n_g,p = 1/2: σ^y_t σ^z_p interaction.
    AnalyticSweetSpot,
    /// Second order at generic offset charge.
    AnalyticGeneral,
    /// Second order including the sin φ_p error couplings.
    AnalyticErrors,
}

/// Low-dimensional hermitian matrix over uncoupled labels.
#[derive(Clone, Debug)]
pub struct EffectiveHamiltonian {
    pub matrix: CMatrix,
    pub labels: Vec<QubitLabel>,
    /// Present when the matrix is 4×4.
    pub pauli: Option<PauliCoefficients>,
    pub provenance: Provenance,
}

impl EffectiveHamiltonian {
    pub fn new(matrix: CMatrix, labels: Vec<QubitLabel>, provenance: Provenance) -> Self {
        let pauli = if matrix.nrows() == 4 {
            pauli_coefficients(&matrix).ok()
        } else {
            None
        };
        Self {
            matrix,
            labels,
            pauli,
            provenance,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}
