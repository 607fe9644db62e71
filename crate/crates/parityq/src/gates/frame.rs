//! Rotating frame at the bare qubit frequencies.

use num_complex::Complex64;

use crate::coupled::QubitLabel;
use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix};
use crate::sw::{pauli_string, EffectiveHamiltonian, Pauli};

/// `K = (ω_t σ^z_t + ω_p σ^z_p)/2`; the frame is `U(t) = exp(−iKt)`.
pub fn frame_generator(omega_t: f64, omega_p: f64) -> CMatrix {
    pauli_string(Pauli::Z, Pauli::I) * c(0.5 * omega_t)
        + pauli_string(Pauli::I, Pauli::Z) * c(0.5 * omega_p)
}

/// `U†H_eff U − iU†U̇` at time `t`.
pub fn rotating_frame_hamiltonian(
    h_eff: &EffectiveHamiltonian,
    omega_t: f64,
    omega_p: f64,
    t: f64,
) -> Result<CMatrix> {
    if h_eff.dim() != 4 {
        return Err(Error::InvalidArgument(format!(
            "rotating frame needs a two-qubit Hamiltonian, got dimension {}",
            h_eff.dim()
        )));
    }
    let k = frame_generator(omega_t, omega_p);
    // K is diagonal, so U is a diagonal phase.
    let phases: Vec<Complex64> = (0..4)
        .map(|i| Complex64::from_polar(1.0, -k[(i, i)].re * t))
        .collect();
    let mut h = h_eff.matrix.clone();
    for i in 0..4 {
        for j in 0..4 {
            h[(i, j)] *= phases[i].conj() * phases[j];
        }
    }
    Ok(h - k)
}

/// Moves a propagator block on the given labels into the rotating frame:
/// row `k` is multiplied by `exp(i(t_k ω_t + p_k ω_p) T)`.
pub fn to_rotating_frame(
    u: &CMatrix,
    labels: &[QubitLabel],
    omega_t: f64,
    omega_p: f64,
    duration: f64,
) -> CMatrix {
    let mut out = u.clone();
    for (k, l) in labels.iter().enumerate() {
        let w = l.t as f64 * omega_t + l.p as f64 * omega_p;
        let ph = Complex64::from_polar(1.0, w * duration);
        for j in 0..out.ncols() {
            out[(k, j)] *= ph;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coupled::COMPUTATIONAL;
    use crate::gates::propagate::propagate_fn;
    use crate::linalg::{expm_i, max_abs};
    use crate::sw::{lab_effective_hamiltonian, Provenance, RotatingCouplings};
    use crate::units::{ghz, mhz};

    fn heff(g: &RotatingCouplings, wt: f64, wp: f64) -> EffectiveHamiltonian {
        EffectiveHamiltonian::new(
            lab_effective_hamiltonian(g, wt, wp),
            COMPUTATIONAL.to_vec(),
            Provenance::Numeric,
        )
    }

    #[test]
    fn z_only_is_static() {
        let g = RotatingCouplings {
            g_zz_plus: mhz(3.0),
            g_zz_minus: mhz(-7.0),
            ..Default::default()
        };
        let h = heff(&g, ghz(4.0), ghz(0.8));
        let a = rotating_frame_hamiltonian(&h, ghz(4.0), ghz(0.8), 0.0).unwrap();
        let b = rotating_frame_hamiltonian(&h, ghz(4.0), ghz(0.8), 3.3e-9).unwrap();
        assert!(max_abs(&(&a - &b)) < 1e-6);
        assert!(max_abs(&(a.clone() - CMatrix::from_diagonal(&a.diagonal()))) < 1e-6);
    }

    #[test]
    fn t0_structure() {
        let g = RotatingCouplings {
            g_y: mhz(1.0),
            g_yz: mhz(2.0),
            ..Default::default()
        };
        let h = heff(&g, ghz(4.0), ghz(0.8));
        let r = rotating_frame_hamiltonian(&h, ghz(4.0), ghz(0.8), 0.0).unwrap();
        // −i(g^yz σ⁺_t σ^z_p + g^y σ⁺_t) + h.c.
        assert!((r[(0, 2)] - Complex64::new(0.0, -(g.g_y + g.g_yz))).norm() < 1e-6);
        assert!((r[(1, 3)] - Complex64::new(0.0, -(g.g_y - g.g_yz))).norm() < 1e-6);
    }

    #[test]
    fn frame_preserves_quasienergies() {
        let g = RotatingCouplings {
            g_zz_plus: mhz(2.0),
            g_zz_minus: mhz(-5.0),
            g_y: mhz(20.0),
            g_yz: mhz(30.0),
            ..Default::default()
        };
        let (wt, wp) = (ghz(1.0), ghz(0.5));
        let period = 2.0 * std::f64::consts::PI / ghz(0.5);
        let h = heff(&g, wt, wp);
        let lab = expm_i(&h.matrix, period);
        let rot = propagate_fn(
            |t| rotating_frame_hamiltonian(&h, wt, wp, t).unwrap(),
            period,
            period / 4000.0,
        )
        .unwrap();
        // U_lab(T) = U_frame(T) U_rot(T)
        let back = expm_i(&frame_generator(wt, wp), period) * &rot;
        assert!(
            max_abs(&(&lab - &back)) < 1e-6,
            "{}",
            max_abs(&(&lab - &back))
        );
    }
}
