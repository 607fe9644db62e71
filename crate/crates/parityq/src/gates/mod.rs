//! Rotating frame, time evolution and gate protocols.

mod fidelity;
mod frame;
mod models;
mod propagate;
mod protocols;
mod rwa;

pub use fidelity::{
    conditional_phase, cz_target, gate_fidelity, leakage, virtual_z_calibrate, wrap_phase, VirtualZ,
};
pub use frame::{frame_generator, rotating_frame_hamiltonian, to_rotating_frame};
pub use models::{FourLevelBuilder, GateModel, GateSystem, SixLevelBuilder};
pub use propagate::{
    auto_step, magnus4_step, piece_propagator, propagate, propagate_fn, resolve_step, Control,
    HamiltonianBuilder, Piece, PulseSchedule, Ramp, Segment, STEPS_PER_PERIOD, UNITARITY_TOL,
};
pub use protocols::{
    compose_gate, composite_target, cz_gate, cz_with_dwell, rotation, single_qubit_gate,
    transfer_fidelity, Axis, ComposeOptions, CompositeKind, CzOptions, DwellInfo, DwellMode,
    GateReport, SingleQubitOptions, DEFAULT_MARGIN, DEFAULT_RAMP, MAX_DWELL,
};
pub use rwa::{rwa_check, RwaCheck};

use serde::ser::SerializeStruct;
use serde::Serializer;

use crate::linalg::CMatrix;

/// Serializes a complex matrix as `{"re": [[..]], "im": [[..]]}`, row-major.
pub fn serialize_matrix<S: Serializer>(m: &CMatrix, s: S) -> Result<S::Ok, S::Error> {
    let rows = |f: fn(&num_complex::Complex64) -> f64| -> Vec<Vec<f64>> {
        (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| f(&m[(i, j)])).collect())
            .collect()
    };
    let mut st = s.serialize_struct("Matrix", 2)?;
    st.serialize_field("re", &rows(|z| z.re))?;
    st.serialize_field("im", &rows(|z| z.im))?;
    st.end()
}
