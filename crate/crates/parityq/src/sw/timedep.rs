//! Rotating-frame model of the effective Hamiltonian and the
//! time-dependent SW correction of its fast terms.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::pauli::{Pauli, PauliCoefficients};
use crate::linalg::{c, commutator, diag, max_abs, CMatrix, I};

/// Which fast terms are kept in the rotating frame.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RwaVariant {
    /// `g^y σ^y_t + g^yz σ^y_t σ^z_p`, rotating at ω_t.
    Drive,
    /// `g^xx σ^x_t σ^x_p + g^yy σ^y_t σ^y_p`, rotating at ω_t ± ω_p.
    SinError,
}

/// How the fast-term denominators are treated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CorrectionForm {
    /// Static detunings dropped: `2G² sin²(Ωt/2)/Ω`. For the drive variant
    /// this is `ZI += 4(g̃^y² + g̃^yz²)/ω_t`, `ZZ += 16 g̃^y g̃^yz/ω_t` in the
    /// `σ^z/2`, `σ^zσ^z/4` normalization.
    #[default]
    Leading,
    /// Full generator result with `Ω + Δ` in place of `Ω`.
    Exact,
}

/// Couplings of the lab-frame effective Hamiltonian (rad/s).
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RotatingCouplings {
    pub g_zz_plus: f64,
    pub g_zz_minus: f64,
    pub g_y: f64,
    pub g_yz: f64,
    pub g_xx: f64,
    pub g_yy: f64,
}

impl RotatingCouplings {
    /// Reads the couplings off a Pauli decomposition; the bare frequencies
    /// fix the `g^zz_+` shift.
    pub fn from_pauli(pc: &PauliCoefficients, omega_t: f64) -> Self {
        Self {
            g_zz_plus: 2.0 * (pc.omega_t() - omega_t),
            g_zz_minus: pc.g_zz_minus(),
            g_y: pc.g_y(),
            g_yz: pc.g_yz(),
            g_xx: pc.g_xx(),
            g_yy: pc.g_yy(),
        }
    }

    /// Diagonal of the static rotating-frame part, basis [11, 10, 01, 00].
    pub fn static_diagonal(&self) -> [f64; 4] {
        let (gp, gm) = (self.g_zz_plus, self.g_zz_minus);
        [
            (gp + 2.0 * gm) / 4.0,
            (gp - 2.0 * gm) / 4.0,
            -gp / 4.0,
            -gp / 4.0,
        ]
    }
}

/// Pauli Z-channel coefficients of a diagonal 4×4 Hamiltonian.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct ZChannels {
    pub zi: f64,
    pub iz: f64,
    pub zz: f64,
}

impl ZChannels {
    pub fn from_diagonal(d: [f64; 4]) -> Self {
        Self {
            zi: (d[0] + d[1] - d[2] - d[3]) / 4.0,
            iz: (d[0] - d[1] + d[2] - d[3]) / 4.0,
            zz: (d[0] - d[1] - d[2] + d[3]) / 4.0,
        }
    }

    pub fn from_pauli(pc: &PauliCoefficients) -> Self {
        Self {
            zi: pc.get(Pauli::Z, Pauli::I),
            iz: pc.get(Pauli::I, Pauli::Z),
            zz: pc.get(Pauli::Z, Pauli::Z),
        }
    }

    /// ZZ rate in the `g^zz_− σ^z σ^z / 4` normalization.
    pub fn g_zz(&self) -> f64 {
        4.0 * self.zz
    }
}

#[derive(Clone, Copy, Debug)]
struct FastTerm {
    i: usize,
    j: usize,
    amplitude: Complex64,
    frequency: f64,
}

/// First-order generator `S₁(t)` removing the fast terms of the
/// rotating-frame model, with `S₁(0) = 0`.
#[derive(Clone, Debug)]
pub struct TimeDependentGenerator {
    energies: [f64; 4],
    terms: Vec<FastTerm>,
}

impl TimeDependentGenerator {
    pub fn new(g: &RotatingCouplings, omega_t: f64, omega_p: f64, variant: RwaVariant) -> Self {
        let terms = match variant {
            RwaVariant::Drive => vec![
                FastTerm {
                    i: 0,
                    j: 2,
                    amplitude: -I * (g.g_y + g.g_yz),
                    frequency: omega_t,
                },
                FastTerm {
                    i: 1,
                    j: 3,
                    amplitude: -I * (g.g_y - g.g_yz),
                    frequency: omega_t,
                },
            ],
            RwaVariant::SinError => vec![
                FastTerm {
                    i: 0,
                    j: 3,
                    amplitude: c(g.g_xx - g.g_yy),
                    frequency: omega_t + omega_p,
                },
                FastTerm {
                    i: 1,
                    j: 2,
                    amplitude: c(g.g_xx + g.g_yy),
                    frequency: omega_t - omega_p,
                },
            ],
        };
        Self {
            energies: g.static_diagonal(),
            terms,
        }
    }

    pub fn h0(&self) -> CMatrix {
        diag(&self.energies)
    }

    /// Fast part `H̃₂(t)`.
    pub fn h2(&self, t: f64) -> CMatrix {
        let mut m = CMatrix::zeros(4, 4);
        for f in &self.terms {
            let v = f.amplitude * Complex64::from_polar(1.0, f.frequency * t);
            m[(f.i, f.j)] += v;
            m[(f.j, f.i)] += v.conj();
        }
        m
    }

    fn detuning(&self, f: &FastTerm) -> f64 {
        self.energies[f.i] - self.energies[f.j]
    }

    /// `S₁(t)`, solving `[S₁, H̃₀] + i dS₁/dt = −H̃₂(t)`.
    pub fn s1(&self, t: f64) -> CMatrix {
        let mut m = CMatrix::zeros(4, 4);
        for f in &self.terms {
            let d = self.detuning(f);
            let v = f.amplitude
                * (Complex64::from_polar(1.0, f.frequency * t)
                    - Complex64::from_polar(1.0, -d * t))
                / (f.frequency + d);
            m[(f.i, f.j)] += v;
            m[(f.j, f.i)] -= v.conj();
        }
        m
    }

    pub fn ds1(&self, t: f64) -> CMatrix {
        let mut m = CMatrix::zeros(4, 4);
        for f in &self.terms {
            let d = self.detuning(f);
            let v = f.amplitude
                * (I * f.frequency * Complex64::from_polar(1.0, f.frequency * t)
                    + I * d * Complex64::from_polar(1.0, -d * t))
                / (f.frequency + d);
            m[(f.i, f.j)] += v;
            m[(f.j, f.i)] -= v.conj();
        }
        m
    }

    /// Largest entry of `[S₁, H̃₀] + i dS₁/dt + H̃₂(t)`.
    pub fn residual(&self, t: f64) -> f64 {
        let r = commutator(&self.s1(t), &self.h0()) + self.ds1(t) * I + self.h2(t);
        max_abs(&r)
    }

    fn effective_frequency(&self, f: &FastTerm, form: CorrectionForm) -> f64 {
        match form {
            CorrectionForm::Leading => f.frequency,
            CorrectionForm::Exact => f.frequency + self.detuning(f),
        }
    }

    /// Closed-form diagonal of `[S₁, H̃₂]/2` (exactly so for
    /// [`CorrectionForm::Exact`]).
    pub fn correction_diagonal(&self, t: f64, form: CorrectionForm) -> [f64; 4] {
        let mut d = [0.0; 4];
        for f in &self.terms {
            let w = self.effective_frequency(f, form);
            let h = 2.0 * f.amplitude.norm_sqr() * (0.5 * w * t).sin().powi(2) / w;
            d[f.i] += h;
            d[f.j] -= h;
        }
        d
    }

    /// `∫₀ᵗ` of [`correction_diagonal`](Self::correction_diagonal).
    pub fn integrated_correction(&self, t: f64, form: CorrectionForm) -> [f64; 4] {
        let mut d = [0.0; 4];
        for f in &self.terms {
            let w = self.effective_frequency(f, form);
            let h = f.amplitude.norm_sqr() / w * (t - (w * t).sin() / w);
            d[f.i] += h;
            d[f.j] -= h;
        }
        d
    }

    /// `H̃₀ + [S₁, H̃₂]/2` as a matrix.
    pub fn corrected(&self, t: f64) -> CMatrix {
        self.h0() + commutator(&self.s1(t), &self.h2(t)) * c(0.5)
    }
}

/// Lab-frame effective Hamiltonian on [11, 10, 01, 00] with bare qubit
/// frequencies `omega_t`, `omega_p`.
pub fn lab_effective_hamiltonian(g: &RotatingCouplings, omega_t: f64, omega_p: f64) -> CMatrix {
    use super::pauli::pauli_string as ps;
    use Pauli::*;
    let wt = omega_t + 0.5 * g.g_zz_plus;
    let wp = omega_p + 0.5 * g.g_zz_minus;
    ps(Z, I) * c(0.5 * wt)
        + ps(I, Z) * c(0.5 * wp)
        + ps(Z, Z) * c(0.25 * g.g_zz_minus)
        + ps(Y, I) * c(g.g_y)
        + ps(Y, Z) * c(g.g_yz)
        + ps(X, X) * c(g.g_xx)
        + ps(Y, Y) * c(g.g_yy)
}

/// Rotating-frame model `H̃₀ + H̃₂(t)` for one variant.
pub fn rotating_model(
    g: &RotatingCouplings,
    omega_t: f64,
    omega_p: f64,
    t: f64,
    variant: RwaVariant,
) -> CMatrix {
    let gen = TimeDependentGenerator::new(g, omega_t, omega_p, variant);
    gen.h0() + gen.h2(t)
}

/// Diagonal rotating-frame Hamiltonian after the time-dependent SW
/// correction, evaluated at `t`.
pub fn corrected_rotating_hamiltonian(
    g: &RotatingCouplings,
    omega_t: f64,
    omega_p: f64,
    t: f64,
    variant: RwaVariant,
    form: CorrectionForm,
) -> CMatrix {
    let gen = TimeDependentGenerator::new(g, omega_t, omega_p, variant);
    let base = g.static_diagonal();
    let corr = gen.correction_diagonal(t, form);
    diag(&std::array::from_fn::<_, 4, _>(|k| base[k] + corr[k]))
}

/// Z channels of the corrected rotating-frame Hamiltonian at `t`.
pub fn rwa_corrected_coefficients(
    g: &RotatingCouplings,
    omega_t: f64,
    omega_p: f64,
    t: f64,
    variant: RwaVariant,
    form: CorrectionForm,
) -> ZChannels {
    let gen = TimeDependentGenerator::new(g, omega_t, omega_p, variant);
    let base = g.static_diagonal();
    let corr = gen.correction_diagonal(t, form);
    ZChannels::from_diagonal(std::array::from_fn(|k| base[k] + corr[k]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::expm_i;
    use crate::units::{ghz, mhz};

    fn couplings() -> RotatingCouplings {
        RotatingCouplings {
            g_zz_plus: mhz(-6.0),
            g_zz_minus: mhz(-9.0),
            g_y: mhz(3.0),
            g_yz: mhz(5.0),
            g_xx: mhz(2.0),
            g_yy: mhz(-1.0),
        }
    }

    #[test]
    fn generator_invariants() {
        let g = couplings();
        for v in [RwaVariant::Drive, RwaVariant::SinError] {
            let gen = TimeDependentGenerator::new(&g, ghz(5.0), ghz(1.3), v);
            assert_eq!(max_abs(&gen.s1(0.0)), 0.0);
            for t in [0.3e-9, 1.7e-9, 12.0e-9] {
                let s = gen.s1(t);
                assert!(max_abs(&(&s + s.adjoint())) < 1e-15);
                assert!(
                    gen.residual(t) < 1e-10 * mhz(10.0),
                    "{v:?} {}",
                    gen.residual(t)
                );
                let m = gen.corrected(t);
                let d = gen.correction_diagonal(t, CorrectionForm::Exact);
                let h0 = g.static_diagonal();
                for k in 0..4 {
                    assert!((m[(k, k)].re - h0[k] - d[k]).abs() < 1e-9 * mhz(1.0));
                }
                let off = m.clone() - CMatrix::from_diagonal(&m.diagonal());
                assert!(max_abs(&off) < 1e-12 * mhz(1.0));
            }
        }
    }

    #[test]
    fn integrated_correction_matches_quadrature() {
        let g = couplings();
        let gen = TimeDependentGenerator::new(&g, ghz(3.0), ghz(0.7), RwaVariant::SinError);
        let t = 2.3e-9;
        let n = 20_000;
        let h = t / n as f64;
        let mut acc = [0.0; 4];
        for i in 0..n {
            let d = gen.correction_diagonal((i as f64 + 0.5) * h, CorrectionForm::Exact);
            for k in 0..4 {
                acc[k] += d[k] * h;
            }
        }
        let exact = gen.integrated_correction(t, CorrectionForm::Exact);
        for k in 0..4 {
            assert!((acc[k] - exact[k]).abs() < 1e-6 * exact[k].abs().max(1e-9));
        }
    }

    #[test]
    fn zero_time_no_correction() {
        let g = couplings();
        let z = rwa_corrected_coefficients(
            &g,
            ghz(5.0),
            ghz(1.0),
            0.0,
            RwaVariant::Drive,
            CorrectionForm::Leading,
        );
        assert_eq!(z, ZChannels::from_diagonal(g.static_diagonal()));
    }

    #[test]
    fn drive_average_zz_shift() {
        let g = couplings();
        let w = ghz(5.0);
        let base = ZChannels::from_diagonal(g.static_diagonal());
        let n = 4000;
        let period = 2.0 * std::f64::consts::PI / w;
        let mean: f64 = (0..n)
            .map(|k| {
                let t = 50.0 * period * (k as f64 + 0.5) / n as f64;
                rwa_corrected_coefficients(
                    &g,
                    w,
                    ghz(1.0),
                    t,
                    RwaVariant::Drive,
                    CorrectionForm::Leading,
                )
                .g_zz()
                    - base.g_zz()
            })
            .sum::<f64>()
            / n as f64;
        let expect = 8.0 * g.g_y * g.g_yz / w;
        assert!(
            (mean - expect).abs() < 0.01 * expect.abs(),
            "{mean} {expect}"
        );
    }

    #[test]
    fn leading_drive_form_matches_closed_expression() {
        let g = couplings();
        let (w, t) = (ghz(5.0), 0.731e-9);
        let z = rwa_corrected_coefficients(
            &g,
            w,
            ghz(1.0),
            t,
            RwaVariant::Drive,
            CorrectionForm::Leading,
        );
        let base = ZChannels::from_diagonal(g.static_diagonal());
        let s = (0.5 * w * t).sin().powi(2);
        // σ^z_t/2 gains 4(g̃^y² + g̃^yz²)/ω_t, σ^zσ^z/4 gains 16 g̃^y g̃^yz/ω_t
        let d_wt = 2.0 * (z.zi - base.zi);
        let d_gzz = z.g_zz() - base.g_zz();
        assert!((d_wt - 4.0 * (g.g_y.powi(2) + g.g_yz.powi(2)) * s / w).abs() < 1e-9 * d_wt.abs());
        assert!((d_gzz - 16.0 * g.g_y * g.g_yz * s / w).abs() < 1e-9 * d_gzz.abs());
        assert!((z.iz - base.iz).abs() < 1e-9 * d_wt.abs());
    }

    #[test]
    fn sin_error_has_no_zz() {
        let g = couplings();
        let z = rwa_corrected_coefficients(
            &g,
            ghz(5.0),
            ghz(1.0),
            0.37e-9,
            RwaVariant::SinError,
            CorrectionForm::Exact,
        );
        let base = ZChannels::from_diagonal(g.static_diagonal());
        assert!((z.zz - base.zz).abs() < 1e-18 * ghz(1.0));
        assert!((z.zi - base.zi).abs() > 0.0);
    }

    #[test]
    fn frame_reproduces_rotating_model() {
        // U†HU − iU†U̇ with U = exp(−i(ω_t Z_t + ω_p Z_p)t/2)
        let g = RotatingCouplings {
            g_xx: 0.0,
            g_yy: 0.0,
            ..couplings()
        };
        let (wt, wp, t) = (ghz(4.0), ghz(1.1), 0.813e-9);
        let lab = lab_effective_hamiltonian(&g, wt, wp);
        let gen = super::super::pauli::pauli_string;
        let k = gen(Pauli::Z, Pauli::I) * c(0.5 * wt) + gen(Pauli::I, Pauli::Z) * c(0.5 * wp);
        let u = expm_i(&k, t);
        let rot = u.adjoint() * &lab * &u - &k;
        let expect = rotating_model(&g, wt, wp, t, RwaVariant::Drive);
        assert!(max_abs(&(rot - expect)) < 1e-6 * mhz(1.0));
    }
}
