//! Second-order Schrieffer–Wolff on the six-level model.

use num_complex::Complex64;
use serde::Serialize;

use super::{EffectiveHamiltonian, Provenance};
use crate::coupled::{CouplingElements, LowEnergyLabels, COMPUTATIONAL};
use crate::error::{Error, Result};
use crate::linalg::{c, commutator, CMatrix, I};

/// Perturbation theory is flagged valid when every detuning exceeds this
/// multiple of its coupling.
pub const VALIDITY_RATIO: f64 = 10.0;
/// Below this multiple the analytic result is refused.
pub const RESONANCE_RATIO: f64 = 2.0;

// six-level indices
const L11: usize = 0;
const L10: usize = 1;
const L01: usize = 2;
const L00: usize = 3;
const L02: usize = 4;
const L03: usize = 5;

/// The six-level Hamiltonian split into the uncoupled diagonal `h0`, the
/// block-diagonal perturbation `h1` (inside P₀ and inside Q) and the
/// off-diagonal perturbation `h2` (P₀ ↔ Q).
#[derive(Clone, Debug)]
pub struct LowEnergyBlocks {
    pub h0: CMatrix,
    pub h1: CMatrix,
    pub h2: CMatrix,
}

impl LowEnergyBlocks {
    pub fn new(e: &CouplingElements, freqs: &LowEnergyLabels) -> Self {
        let mut h0 = CMatrix::zeros(6, 6);
        for i in 0..6 {
            h0[(i, i)] = c(freqs.frequencies[i]);
        }
        let mut h1 = CMatrix::zeros(6, 6);
        let set = |m: &mut CMatrix, i: usize, j: usize, v: Complex64| {
            m[(i, j)] = v;
            m[(j, i)] = v.conj();
        };
        set(&mut h1, L11, L01, -I * e.eta1);
        set(&mut h1, L10, L00, I * e.eta2);
        let single = Complex64::new(e.dh_x, e.dh_y);
        set(&mut h1, L10, L11, single);
        set(&mut h1, L00, L01, single);
        set(&mut h1, L02, L03, c(e.chi));
        let mut h2 = CMatrix::zeros(6, 6);
        set(&mut h2, L11, L02, c(e.lambda1));
        set(&mut h2, L10, L03, c(-e.lambda2));
        set(&mut h2, L00, L02, c(e.kappa));
        set(&mut h2, L01, L03, c(e.kappa_alt));
        Self { h0, h1, h2 }
    }

    /// Smallest |Δ|/|coupling| over the P₀ ↔ Q couplings, and whether the
    /// perturbative condition holds.
    fn detuning_check(&self) -> Result<(f64, bool)> {
        let mut worst = f64::INFINITY;
        for i in 0..4 {
            for j in 4..6 {
                let g = self.h2[(i, j)].norm();
                if g == 0.0 {
                    continue;
                }
                let delta = (self.h0[(i, i)] - self.h0[(j, j)]).re;
                let ratio = delta.abs() / g;
                if ratio < RESONANCE_RATIO {
                    return Err(Error::Resonance {
                        detuning: delta,
                        coupling: g,
                    });
                }
                worst = worst.min(ratio);
            }
        }
        Ok((worst, worst >= VALIDITY_RATIO))
    }
}

/// Antihermitian `S` with `[H0, S] = −H2`.
pub fn static_generator(blocks: &LowEnergyBlocks) -> Result<CMatrix> {
    blocks.detuning_check()?;
    let mut s = CMatrix::zeros(6, 6);
    for i in 0..6 {
        for j in 0..6 {
            let v = blocks.h2[(i, j)];
            if v.norm() == 0.0 {
                continue;
            }
            let delta = (blocks.h0[(i, i)] - blocks.h0[(j, j)]).re;
            s[(i, j)] = -v / delta;
        }
    }
    Ok(s)
}

/// Computational-subspace block of `H0 + H1 + [H2, S]/2`.
pub fn analytic_effective_hamiltonian(
    elements: &CouplingElements,
    freqs: &LowEnergyLabels,
    n_g_p: f64,
) -> Result<EffectiveHamiltonian> {
    let blocks = LowEnergyBlocks::new(elements, freqs);
    let s = static_generator(&blocks)?;
    let full = &blocks.h0 + &blocks.h1 + commutator(&blocks.h2, &s) * c(0.5);
    let p0 = full.view((0, 0), (4, 4)).into_owned();
    let frac = n_g_p.rem_euclid(1.0);
    let provenance = if elements.kappa != 0.0 || elements.kappa_alt != 0.0 {
        Provenance::AnalyticErrors
    } else if frac.min(1.0 - frac) < 1e-12 {
        Provenance::AnalyticZeroOffset
    } else if (frac - 0.5).abs() < 1e-12 {
        Provenance::AnalyticSweetSpot
    } else {
        Provenance::AnalyticGeneral
    };
    Ok(EffectiveHamiltonian::new(
        p0,
        COMPUTATIONAL.to_vec(),
        provenance,
    ))
}

/// Closed-form second-order couplings (rad/s).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AnalyticCoefficients {
    /// `λ′²/(ω₁₁−ω₀₂) + λ″²/(ω₁₀−ω₀₃)`.
    pub g_zz_plus: f64,
    /// `λ′²/(ω₁₁−ω₀₂) − λ″²/(ω₁₀−ω₀₃)`.
    pub g_zz_minus: f64,
    pub g_y: f64,
    pub g_yz: f64,
    /// `ω_t + g^zz_+/2` with ω_t at the flux the frequencies were taken.
    pub omega_t: f64,
    /// `ω_p + g^zz_−/2`.
    pub omega_p: f64,
    /// Smallest detuning-to-coupling ratio.
    pub min_ratio: f64,
    pub perturbative: bool,
}

pub fn analytic_coefficients(
    e: &CouplingElements,
    f: &LowEnergyLabels,
) -> Result<AnalyticCoefficients> {
    let blocks = LowEnergyBlocks::new(e, f);
    let (min_ratio, perturbative) = blocks.detuning_check()?;
    let om1 = e.lambda1 * e.lambda1 / (f.omega(1, 1) - f.omega(0, 2));
    let om2 = e.lambda2 * e.lambda2 / (f.omega(1, 0) - f.omega(0, 3));
    let g_plus = om1 + om2;
    let g_minus = om1 - om2;
    let omega_t = f.omega(1, 0) - f.omega(0, 0);
    let omega_p = f.omega(0, 1) - f.omega(0, 0);
    Ok(AnalyticCoefficients {
        g_zz_plus: g_plus,
        g_zz_minus: g_minus,
        g_y: e.g_y(),
        g_yz: e.g_yz(),
        omega_t: omega_t + 0.5 * g_plus,
        omega_p: omega_p + 0.5 * g_minus,
        min_ratio,
        perturbative,
    })
}

/// Couplings generated by the sin φ_p error (rad/s).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ErrorCouplings {
    /// σ⁺_t σ⁺_p coefficient.
    pub g_pp: f64,
    /// σ⁺_t σ⁻_p coefficient.
    pub g_pm: f64,
    pub g_xx: f64,
    pub g_yy: f64,
}

impl ErrorCouplings {
    fn from_pp_pm(g_pp: f64, g_pm: f64) -> Self {
        Self {
            g_pp,
            g_pm,
            g_xx: 0.5 * (g_pm + g_pp),
            g_yy: 0.5 * (g_pm - g_pp),
        }
    }
}

/// Closed forms keeping only the near-resonant denominators
/// `ω₁₁−ω₀₂` and `ω₀₃−ω₁₀`.
pub fn error_coupling_coefficients(
    e: &CouplingElements,
    f: &LowEnergyLabels,
) -> Result<ErrorCouplings> {
    LowEnergyBlocks::new(e, f).detuning_check()?;
    let d1 = f.omega(1, 1) - f.omega(0, 2);
    let d2 = f.omega(0, 3) - f.omega(1, 0);
    let g_pp = e.kappa * e.lambda1 / (2.0 * d1);
    let g_pm = e.kappa * e.lambda2 / (2.0 * d2);
    let out = ErrorCouplings {
        g_pp,
        g_pm,
        g_xx: e.kappa / 4.0 * (e.lambda1 / d1 + e.lambda2 / d2),
        g_yy: e.kappa / 4.0 * (-e.lambda1 / d1 + e.lambda2 / d2),
    };
    Ok(out)
}

/// Same couplings from the full second-order generator, including the
/// far-detuned `ω₀₂−ω₀₀` and `ω₀₃−ω₀₁` denominators.
pub fn error_coupling_coefficients_full(
    e: &CouplingElements,
    f: &LowEnergyLabels,
) -> Result<ErrorCouplings> {
    LowEnergyBlocks::new(e, f).detuning_check()?;
    let g_pp = e.kappa * e.lambda1 / 2.0
        * (1.0 / (f.omega(1, 1) - f.omega(0, 2)) - 1.0 / (f.omega(0, 2) - f.omega(0, 0)));
    let g_pm = e.kappa_alt * e.lambda2 / 2.0
        * (1.0 / (f.omega(0, 3) - f.omega(1, 0)) + 1.0 / (f.omega(0, 3) - f.omega(0, 1)));
    Ok(ErrorCouplings::from_pp_pm(g_pp, g_pm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit_ops::CircuitParams;
    use crate::coupled::{IslandStates, SIX_LEVEL};
    use crate::linalg::max_abs;
    use crate::units::ghz;

    fn setup(p: &CircuitParams, flux: f64) -> (CouplingElements, LowEnergyLabels) {
        let s = IslandStates::new(p, flux, 2, 4).unwrap();
        (
            CouplingElements::from_states(&s),
            LowEnergyLabels::from_states(&s),
        )
    }

    #[test]
    fn generator_solves_commutator_equation() {
        let p = CircuitParams::reference().with_errors(0.0, 0.05 * ghz(2.7));
        let (e, f) = setup(&p, 0.05);
        let b = LowEnergyBlocks::new(&e, &f);
        let s = static_generator(&b).unwrap();
        assert!(max_abs(&(&s + s.adjoint())) == 0.0);
        let r = commutator(&b.h0, &s) + &b.h2;
        assert!(max_abs(&r) < 1e-10 * max_abs(&b.h2));
        // entries at [11, 02] and [10, 03]
        let w1 = f.omega(1, 1) - f.omega(0, 2);
        let w2 = f.omega(1, 0) - f.omega(0, 3);
        assert!((s[(0, 4)].re + e.lambda1 / w1).abs() < 1e-12);
        assert!((s[(1, 5)].re - e.lambda2 / w2).abs() < 1e-12);
        let _ = SIX_LEVEL;
    }

    #[test]
    fn zero_offset_is_z_only() {
        let p = CircuitParams::reference();
        let (e, f) = setup(&p, 0.0);
        let h = analytic_effective_hamiltonian(&e, &f, 0.0).unwrap();
        assert_eq!(h.provenance, Provenance::AnalyticZeroOffset);
        let pc = h.pauli.unwrap();
        for (name, v) in pc.iter() {
            if name.contains('X') || name.contains('Y') {
                assert!(v.abs() < 1e-9 * p.e_c_c, "{name} = {v}");
            }
        }
        let a = analytic_coefficients(&e, &f).unwrap();
        assert!((pc.g_zz_minus() - a.g_zz_minus).abs() < 1e-9 * a.g_zz_minus.abs());
        assert!((pc.omega_t() - a.omega_t).abs() < 1e-6 * a.omega_t);
    }

    #[test]
    fn sweet_spot_is_yz() {
        let p = CircuitParams::reference().with_n_g_p(0.5);
        let (e, f) = setup(&p, 0.0);
        let h = analytic_effective_hamiltonian(&e, &f, 0.5).unwrap();
        assert_eq!(h.provenance, Provenance::AnalyticSweetSpot);
        let pc = h.pauli.unwrap();
        assert!(pc.g_zz_minus().abs() < 1e-9 * p.e_c_c);
        assert!(pc.omega_p().abs() < 1e-9 * p.e_c_c);
        assert!(pc.g_yz().abs() > 1e-3 * p.e_c_c);
    }

    #[test]
    fn resonance_is_refused() {
        let p = CircuitParams::reference();
        let (mut e, mut f) = setup(&p, 0.0);
        f.frequencies[5] = f.frequencies[1] + 0.5 * e.lambda2.abs();
        assert!(matches!(
            analytic_effective_hamiltonian(&e, &f, 0.0),
            Err(Error::Resonance { .. })
        ));
        e.lambda2 = 0.0;
        assert!(analytic_effective_hamiltonian(&e, &f, 0.0).is_ok());
    }

    #[test]
    fn error_couplings_identities() {
        let p = CircuitParams::reference().with_errors(0.0, 0.05 * ghz(2.7));
        let (mut e, f) = setup(&p, 0.0);
        let g = error_coupling_coefficients(&e, &f).unwrap();
        assert!((g.g_pp - (g.g_xx - g.g_yy)).abs() < 1e-12 * g.g_pp.abs());
        assert!((g.g_pm - (g.g_xx + g.g_yy)).abs() < 1e-12 * g.g_pm.abs());
        e.lambda2 = 0.0;
        let g = error_coupling_coefficients(&e, &f).unwrap();
        assert!((g.g_xx + g.g_yy).abs() < 1e-15);
        let q = CircuitParams::reference();
        let (e, f) = setup(&q, 0.0);
        let g = error_coupling_coefficients(&e, &f).unwrap();
        assert_eq!([g.g_pp, g.g_pm, g.g_xx, g.g_yy], [0.0; 4]);
    }

    #[test]
    fn full_error_couplings_match_generator() {
        let p = CircuitParams::reference().with_errors(0.0, 0.05 * ghz(2.7));
        let (e, f) = setup(&p, 0.0);
        let h = analytic_effective_hamiltonian(&e, &f, 0.0).unwrap();
        let pc = h.pauli.unwrap();
        let g = error_coupling_coefficients_full(&e, &f).unwrap();
        assert!((pc.g_xx() - g.g_xx).abs() < 1e-9 * g.g_xx.abs());
        assert!((pc.g_yy() - g.g_yy).abs() < 1e-9 * g.g_yy.abs());
    }
}
