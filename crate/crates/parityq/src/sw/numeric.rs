//! Direct-rotation (SVD) Schrieffer–Wolff transformation.

use nalgebra::SVD;
use num_complex::Complex64;

use super::{EffectiveHamiltonian, Provenance};
use crate::circuit_ops::Operator;
use crate::coupled::{ProductModel, QubitLabel};
use crate::error::{Error, Result};
use crate::linalg::{c, diag, eigh, CMatrix};
use crate::spectra::eigendecompose;

pub const MIN_SINGULAR_VALUE: f64 = 0.5;

/// How the coupled eigenstates spanning the target subspace are chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selection {
    /// The `d` lowest coupled states.
    Lowest,
    /// The `d` coupled states with the largest weight in span(V₀); needed
    /// when the target labels are not the lowest uncoupled levels.
    MaxOverlap,
}

#[derive(Clone, Debug)]
pub struct NumericSw {
    pub effective: EffectiveHamiltonian,
    /// Unitary `A = W_s V_s†` from `B = V₀†V = W_s Σ V_s†`.
    pub rotation: CMatrix,
    pub singular_values: Vec<f64>,
    /// Energies of the selected coupled states, ascending.
    pub coupled_energies: Vec<f64>,
    /// Dressed images of the uncoupled states, `V A†` (one column per
    /// label).
    pub dressed: CMatrix,
}

/// Direct rotation of the uncoupled states `v0` (columns) onto the
/// corresponding coupled subspace of `h`.
pub fn direct_rotation(
    v0: &CMatrix,
    h: &CMatrix,
    selection: Selection,
    labels: Vec<QubitLabel>,
) -> Result<NumericSw> {
    let d = v0.ncols();
    if d == 0 || d > h.nrows() || v0.nrows() != h.nrows() {
        return Err(Error::InvalidArgument(format!(
            "{} target states in dimension {}",
            d,
            h.nrows()
        )));
    }
    let (values, vectors) = eigh(h);
    let chosen: Vec<usize> = match selection {
        Selection::Lowest => (0..d).collect(),
        Selection::MaxOverlap => {
            let proj = v0.adjoint() * &vectors;
            let mut w: Vec<(f64, usize)> = (0..values.len())
                .map(|k| (proj.column(k).norm_squared(), k))
                .collect();
            w.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
            let mut idx: Vec<usize> = w[..d].iter().map(|&(_, k)| k).collect();
            idx.sort_unstable();
            idx
        }
    };
    let v = CMatrix::from_columns(
        &chosen
            .iter()
            .map(|&k| vectors.column(k))
            .collect::<Vec<_>>(),
    );
    let energies: Vec<f64> = chosen.iter().map(|&k| values[k]).collect();
    finish(v0, &v, energies, labels)
}

fn finish(
    v0: &CMatrix,
    v: &CMatrix,
    energies: Vec<f64>,
    labels: Vec<QubitLabel>,
) -> Result<NumericSw> {
    let b = v0.adjoint() * v;
    let svd = SVD::new(b, true, true);
    let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    if min < MIN_SINGULAR_VALUE {
        return Err(Error::SubspaceMismatch { min_singular: min });
    }
    let u = svd.u.expect("requested U");
    let vt = svd.v_t.expect("requested V^T");
    let a = u * vt;
    let heff = &a * diag(&energies) * a.adjoint();
    let heff = (&heff + heff.adjoint()) * c(0.5);
    let dressed = v * a.adjoint();
    Ok(NumericSw {
        effective: EffectiveHamiltonian::new(heff, labels, Provenance::Numeric),
        rotation: a,
        singular_values: sv,
        coupled_energies: energies,
        dressed,
    })
}

/// `d` lowest states of `h0` mapped onto the `d` lowest states of `h`.
pub fn numerical_sw(h0: &Operator, h: &Operator, d: usize) -> Result<NumericSw> {
    if h0.dim() != h.dim() {
        return Err(Error::InvalidArgument(
            "H0 and H differ in dimension".into(),
        ));
    }
    let s0 = eigendecompose(h0, d)?;
    let s = eigendecompose(h, d)?;
    let labels = (0..d).map(|k| QubitLabel::new(0, k)).collect();
    finish(
        &s0.eigenvectors,
        &s.eigenvectors,
        s.eigenvalues.clone(),
        labels,
    )
}

/// Effective Hamiltonian of the product model on the given uncoupled labels
/// (selected by overlap), expressed in label order.
pub fn product_sw(model: &ProductModel, labels: &[QubitLabel]) -> Result<NumericSw> {
    let n = model.dim();
    let mut v0 = CMatrix::zeros(n, labels.len());
    for (j, l) in labels.iter().enumerate() {
        if l.t >= model.levels_t || l.p >= model.levels_p {
            return Err(Error::InvalidArgument(format!(
                "label {l} outside the model"
            )));
        }
        v0[(model.index(*l), j)] = Complex64::new(1.0, 0.0);
    }
    direct_rotation(
        &v0,
        &model.hamiltonian().matrix,
        Selection::MaxOverlap,
        labels.to_vec(),
    )
}
