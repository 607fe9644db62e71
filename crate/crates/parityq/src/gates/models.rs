//! Simulation models for gate propagation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::frame::to_rotating_frame;
use super::propagate::{Control, HamiltonianBuilder};
use crate::circuit_ops::CircuitParams;
use crate::coupled::{
    ProductModel, QubitLabel, COMPUTATIONAL, DEFAULT_LEVELS_P, DEFAULT_LEVELS_T, SIX_LEVEL,
};
use crate::error::Result;
use crate::linalg::{c, eigh, CMatrix, CVector, I};
use crate::spectra::{anchor_largest_component, Parity};
use crate::sw::{direct_rotation, Selection};

/// Hilbert space used for time evolution.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GateModel {
    /// Truncated product basis of island eigenstates (6 × 14 levels).
    Full,
    /// The six labels {11, 10, 01, 00, 02, 03}.
    #[default]
    Six,
    /// Numeric SW effective Hamiltonian on the computational labels,
    /// recomputed at every flux.
    Four,
}

impl HamiltonianBuilder for ProductModel {
    fn dim(&self) -> usize {
        ProductModel::dim(self)
    }

    fn hamiltonian(&self, u: &Control) -> Result<CMatrix> {
        Ok(self.hamiltonian_with(u.flux, u.eps_x, u.eps_y, 1.0))
    }
}

/// Six-level Hamiltonian in the instantaneous transmon eigenbasis; the
/// transmon is diagonalized inside the idle-flux product basis.
#[derive(Clone, Debug)]
pub struct SixLevelBuilder {
    model: ProductModel,
}

impl SixLevelBuilder {
    pub fn new(params: &CircuitParams, idle_flux: f64) -> Result<Self> {
        Ok(Self {
            model: ProductModel::new(params, idle_flux, DEFAULT_LEVELS_T, 4)?,
        })
    }

    /// Two lowest transmon levels at `flux`: energies and `⟨i|n_t|j⟩`.
    fn transmon_pair(&self, flux: f64) -> ([f64; 2], CMatrix) {
        let (vals, mut vecs) = eigh(&self.model.transmon_block(flux));
        for k in 0..2 {
            let mut col: Vec<Complex64> = vecs.column(k).iter().copied().collect();
            anchor_largest_component(&mut col);
            vecs.set_column(k, &CVector::from_vec(col));
        }
        let v = vecs.columns(0, 2).into_owned();
        let mut n = v.adjoint() * &self.model.states.n_t * &v;
        // ⟨0|n|1⟩ on the positive imaginary axis
        let z = n[(0, 1)];
        if z.norm() > 0.0 {
            let ph = I * z.norm() / z;
            n[(0, 1)] *= ph;
            n[(1, 0)] *= ph.conj();
        }
        ([vals[0], vals[1]], n)
    }
}

impl HamiltonianBuilder for SixLevelBuilder {
    fn dim(&self) -> usize {
        6
    }

    fn hamiltonian(&self, u: &Control) -> Result<CMatrix> {
        let s = &self.model.states;
        let (et, nt) = self.transmon_pair(u.flux);
        let e0 = s.ppq.eigenvalues[0];
        let g = 4.0 * s.params.e_c_c;
        let mut h = CMatrix::zeros(6, 6);
        for (i, a) in SIX_LEVEL.iter().enumerate() {
            for (j, b) in SIX_LEVEL.iter().enumerate() {
                let mut v = nt[(a.t, b.t)] * s.n_p[(a.p, b.p)] * g;
                if a.t == b.t {
                    v -= s.cos_p[(a.p, b.p)] * u.eps_x + s.sin_p[(a.p, b.p)] * u.eps_y;
                }
                if i == j {
                    v += c(et[a.t] + s.ppq.eigenvalues[a.p] - e0);
                }
                h[(i, j)] = v;
            }
        }
        Ok(h)
    }
}

/// Numeric SW reduction of [`SixLevelBuilder`] onto the computational
/// labels.
#[derive(Clone, Debug)]
pub struct FourLevelBuilder {
    six: SixLevelBuilder,
}

impl FourLevelBuilder {
    pub fn new(params: &CircuitParams, idle_flux: f64) -> Result<Self> {
        Ok(Self {
            six: SixLevelBuilder::new(params, idle_flux)?,
        })
    }
}

fn unit_columns(dim: usize, idx: &[usize]) -> CMatrix {
    let mut v = CMatrix::zeros(dim, idx.len());
    for (j, &i) in idx.iter().enumerate() {
        v[(i, j)] = c(1.0);
    }
    v
}

impl HamiltonianBuilder for FourLevelBuilder {
    fn dim(&self) -> usize {
        4
    }

    fn hamiltonian(&self, u: &Control) -> Result<CMatrix> {
        let h6 = self.six.hamiltonian(u)?;
        let sw = direct_rotation(
            &unit_columns(6, &[0, 1, 2, 3]),
            &h6,
            Selection::MaxOverlap,
            COMPUTATIONAL.to_vec(),
        )?;
        Ok(sw.effective.matrix)
    }
}

/// A simulation model with its logical (dressed idle) basis and frame.
pub struct GateSystem {
    pub model: GateModel,
    pub params: CircuitParams,
    builder: Box<dyn HamiltonianBuilder + Send + Sync>,
    /// Dressed computational states at idle, one column per label.
    pub logical: CMatrix,
    /// PPQ parity of every model basis state.
    pub parity: Vec<Parity>,
    /// Bare idle frequencies defining the rotating frame.
    pub omega_t: f64,
    pub omega_p: f64,
    pub idle: Control,
}

impl GateSystem {
    /// Model at the idle point `params.flux` with the error amplitudes of
    /// `params` applied while idling.
    pub fn new(params: &CircuitParams, model: GateModel) -> Result<Self> {
        let idle = Control {
            flux: params.flux,
            eps_x: params.eps_x,
            eps_y: params.eps_y,
        };
        let product = ProductModel::new(params, params.flux, DEFAULT_LEVELS_T, DEFAULT_LEVELS_P)?;
        let pp = product
            .states
            .ppq
            .parity
            .clone()
            .expect("ppq spectrum carries parity");
        let omega_t = product.states.transmon.transition(1);
        let omega_p = product.states.ppq.transition(1);
        let label_parity = |l: &QubitLabel| pp[l.p];
        let (builder, comp, parity): (
            Box<dyn HamiltonianBuilder + Send + Sync>,
            Vec<usize>,
            Vec<Parity>,
        ) = match model {
            GateModel::Full => {
                let comp = COMPUTATIONAL.iter().map(|l| product.index(*l)).collect();
                let parity = product.parity();
                (Box::new(product), comp, parity)
            }
            GateModel::Six => (
                Box::new(SixLevelBuilder::new(params, params.flux)?),
                vec![0, 1, 2, 3],
                SIX_LEVEL.iter().map(label_parity).collect(),
            ),
            GateModel::Four => (
                Box::new(FourLevelBuilder::new(params, params.flux)?),
                vec![0, 1, 2, 3],
                COMPUTATIONAL.iter().map(label_parity).collect(),
            ),
        };
        let dim = builder.dim();
        let logical = if model == GateModel::Four {
            CMatrix::identity(4, 4)
        } else {
            let h = builder.hamiltonian(&idle)?;
            direct_rotation(
                &unit_columns(dim, &comp),
                &h,
                Selection::MaxOverlap,
                COMPUTATIONAL.to_vec(),
            )?
            .dressed
        };
        Ok(Self {
            model,
            params: *params,
            builder,
            logical,
            parity,
            omega_t,
            omega_p,
            idle,
        })
    }

    pub fn builder(&self) -> &(dyn HamiltonianBuilder + Send + Sync) {
        self.builder.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.builder.dim()
    }

    /// Logical 4×4 block of a model propagator, in the rotating frame at
    /// time `duration`.
    pub fn logical_block(&self, u: &CMatrix, duration: f64) -> CMatrix {
        let b = self.logical.adjoint() * u * &self.logical;
        to_rotating_frame(&b, &COMPUTATIONAL, self.omega_t, self.omega_p, duration)
    }

    /// Largest weight any logical state sends into the opposite PPQ parity
    /// sector.
    pub fn parity_violation(&self, u: &CMatrix) -> f64 {
        let mut worst = 0.0f64;
        for (k, l) in COMPUTATIONAL.iter().enumerate() {
            let own = self.parity[self.label_row(l)];
            let psi = u * self.logical.column(k);
            let w: f64 = psi
                .iter()
                .zip(&self.parity)
                .filter(|(_, p)| {
                    matches!(
                        (own, **p),
                        (Parity::Even, Parity::Odd) | (Parity::Odd, Parity::Even)
                    )
                })
                .map(|(z, _)| z.norm_sqr())
                .sum();
            worst = worst.max(w);
        }
        worst
    }

    fn label_row(&self, l: &QubitLabel) -> usize {
        match self.model {
            GateModel::Full => l.t * DEFAULT_LEVELS_P + l.p,
            _ => COMPUTATIONAL
                .iter()
                .position(|x| x == l)
                .expect("computational label"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coupled::low_energy_hamiltonian;
    use crate::linalg::max_abs;

    #[test]
    fn six_level_matches_projection() {
        let p = CircuitParams::reference();
        let b = SixLevelBuilder::new(&p, 0.0).unwrap();
        for flux in [0.0, 0.12, 0.2] {
            let h = b.hamiltonian(&Control::at_flux(flux)).unwrap();
            let mut reference = low_energy_hamiltonian(&p, flux).unwrap().matrix;
            let shift = h[(3, 3)] - reference[(3, 3)];
            for k in 0..6 {
                reference[(k, k)] += shift;
            }
            let d = max_abs(&(&h - &reference));
            // the transmon is represented in six idle levels
            assert!(d < 1e-4 * p.e_c_c, "flux {flux}: {d}");
        }
    }

    #[test]
    fn four_level_is_hermitian_and_parity_blocked() {
        let p = CircuitParams::reference();
        let b = FourLevelBuilder::new(&p, 0.0).unwrap();
        let h = b.hamiltonian(&Control::at_flux(0.15)).unwrap();
        assert!(max_abs(&(&h - h.adjoint())) < 1e-6);
        // 11 ↔ 10 and 01 ↔ 00 connect opposite parity
        assert!(h[(0, 1)].norm() < 1e-9 * p.e_c_c);
        assert!(h[(2, 3)].norm() < 1e-9 * p.e_c_c);
    }

    #[test]
    fn logical_basis_is_orthonormal() {
        let p = CircuitParams::reference();
        for m in [GateModel::Full, GateModel::Six, GateModel::Four] {
            let s = GateSystem::new(&p, m).unwrap();
            let g = s.logical.adjoint() * &s.logical;
            assert!(max_abs(&(g - CMatrix::identity(4, 4))) < 1e-10);
            let id = CMatrix::identity(s.dim(), s.dim());
            assert!(s.parity_violation(&id) < 1e-12);
        }
    }
}
