//! Gate metrics on the computational block.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix};

/// Average gate fidelity `(|Tr(T†U)|² + Tr(U†U))/(d(d+1))`; `U` may be
/// non-unitary through leakage.
pub fn gate_fidelity(actual: &CMatrix, target: &CMatrix) -> f64 {
    let d = target.nrows() as f64;
    let overlap = (target.adjoint() * actual).trace().norm_sqr();
    let norm = (actual.adjoint() * actual).trace().re;
    ((overlap + norm) / (d * (d + 1.0))).clamp(0.0, 1.0)
}

/// Wraps an angle into `(−π, π]`.
pub fn wrap_phase(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// `arg U₁₁ − arg U₁₀ − arg U₀₁ + arg U₀₀` on the basis [11, 10, 01, 00],
/// so that `CZ^{10}_φ` has conditional phase φ.
pub fn conditional_phase(u: &CMatrix) -> f64 {
    let a = |k: usize| u[(k, k)].arg();
    wrap_phase(a(0) - a(1) - a(2) + a(3))
}

/// `|0_t⟩⟨0_t| ⊗ I + |1_t⟩⟨1_t| ⊗ (e^{−iφ}|0_p⟩⟨0_p| + |1_p⟩⟨1_p|)`.
pub fn cz_target(phi: f64) -> CMatrix {
    let mut m = CMatrix::identity(4, 4);
    m[(1, 1)] = Complex64::from_polar(1.0, -phi);
    m
}

/// `1 − min_k ‖U e_k‖²`.
pub fn leakage(u: &CMatrix) -> f64 {
    let min = (0..u.ncols())
        .map(|k| u.column(k).norm_squared())
        .fold(f64::INFINITY, f64::min);
    (1.0 - min).clamp(0.0, 1.0)
}

/// Local Z phases `diag(e^{i(α+β)}, e^{iα}, e^{iβ}, 1)` applied after the
/// gate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct VirtualZ {
    pub alpha: f64,
    pub beta: f64,
}

impl VirtualZ {
    pub fn matrix(&self) -> CMatrix {
        let p = |x: f64| Complex64::from_polar(1.0, x);
        let mut m = CMatrix::zeros(4, 4);
        m[(0, 0)] = p(self.alpha + self.beta);
        m[(1, 1)] = p(self.alpha);
        m[(2, 2)] = p(self.beta);
        m[(3, 3)] = c(1.0);
        m
    }

    pub fn apply(&self, u: &CMatrix) -> CMatrix {
        self.matrix() * u
    }
}

const VZ_SWEEPS: usize = 200;

/// Local Z phases maximizing `|Tr(T† Z U)|`, by exact coordinate ascent
/// over α and β.
pub fn virtual_z_calibrate(u: &CMatrix, target: &CMatrix) -> Result<VirtualZ> {
    if u.shape() != (4, 4) || target.shape() != (4, 4) {
        return Err(Error::InvalidArgument(
            "virtual-Z calibration needs 4x4 matrices".into(),
        ));
    }
    // Tr(T† Z U) = Σ_k e^{i z_k} w_k,  w_k = Σ_j (T†)_jk U_kj
    let m = target.adjoint();
    let w: Vec<Complex64> = (0..4)
        .map(|k| (0..4).map(|j| m[(j, k)] * u[(k, j)]).sum())
        .collect();
    let mut z = VirtualZ::default();
    let score = |z: &VirtualZ| {
        let p = |x: f64| Complex64::from_polar(1.0, x);
        w[0] * p(z.alpha + z.beta) + w[1] * p(z.alpha) + w[2] * p(z.beta) + w[3]
    };
    let mut best = score(&z).norm();
    for _ in 0..VZ_SWEEPS {
        let p = |x: f64| Complex64::from_polar(1.0, x);
        let a = w[0] * p(z.beta) + w[1];
        let b = w[2] * p(z.beta) + w[3];
        if a.norm() > 0.0 && b.norm() > 0.0 {
            z.alpha = b.arg() - a.arg();
        }
        let a = w[0] * p(z.alpha) + w[2];
        let b = w[1] * p(z.alpha) + w[3];
        if a.norm() > 0.0 && b.norm() > 0.0 {
            z.beta = b.arg() - a.arg();
        }
        let s = score(&z).norm();
        if s - best <= 1e-15 * s.max(1.0) {
            break;
        }
        best = s;
    }
    z.alpha = wrap_phase(z.alpha);
    z.beta = wrap_phase(z.beta);
    Ok(z)
}
