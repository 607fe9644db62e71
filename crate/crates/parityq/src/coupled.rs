//! The composite transmon ⊗ PPQ system: full charge-basis assembly, matrix
//! elements of the coupling between labeled single-island states, the
//! six-level low-energy projection and anti-crossing search.

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::circuit_ops::{
    cos_phi, number_operator, ppq_error_hamiltonians, ppq_hamiltonian, sin_phi,
    transmon_hamiltonian, BasisDescriptor, ChargeBasis, CircuitParams, Operator, DEFAULT_CUTOFF,
};
use crate::error::{Error, Result};
use crate::linalg::{c, eigh, kron, CMatrix};
use crate::spectra::lanczos::SparseOperator;
use crate::spectra::{ppq_spectrum, transmon_spectrum, Parity, Spectrum};

/// Transmon charge basis ⊗ PPQ charge basis; flattened index
/// `i_t · dim_p + i_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompositeBasis {
    pub transmon: ChargeBasis,
    pub ppq: ChargeBasis,
}

impl CompositeBasis {
    pub fn new(transmon: ChargeBasis, ppq: ChargeBasis) -> Self {
        Self { transmon, ppq }
    }

    pub fn with_cutoffs(n_t: usize, n_p: usize) -> Result<Self> {
        Ok(Self::new(
            ChargeBasis::transmon(n_t)?,
            ChargeBasis::ppq(n_p)?,
        ))
    }

    pub fn dim(&self) -> usize {
        self.transmon.dim() * self.ppq.dim()
    }

    pub fn index(&self, i_t: usize, i_p: usize) -> usize {
        i_t * self.ppq.dim() + i_p
    }

    pub fn descriptor(&self) -> BasisDescriptor {
        BasisDescriptor::Composite(self.transmon, self.ppq)
    }
}

/// `4E_C,c (n_p − n_g,p)(n_t − n_g,t)`, diagonal in the composite basis.
pub fn coupling_hamiltonian(basis: &CompositeBasis, params: &CircuitParams) -> SparseOperator {
    let mut trip = Vec::with_capacity(basis.dim());
    for i_t in 0..basis.transmon.dim() {
        let qt = basis.transmon.charge(i_t) as f64 - params.n_g_t;
        for i_p in 0..basis.ppq.dim() {
            let qp = basis.ppq.charge(i_p) as f64 - params.n_g_p;
            let v = 4.0 * params.e_c_c * qt * qp;
            if v != 0.0 {
                let i = basis.index(i_t, i_p);
                trip.push((i, i, c(v)));
            }
        }
    }
    SparseOperator::from_triplets(basis.dim(), trip, basis.descriptor())
}

/// `H_t ⊗ I + I ⊗ (H_p + H^x + H^y) + H_c` at the flux in `params`. The
/// error terms vanish unless `eps_x`/`eps_y` are set.
pub fn assemble_full(params: &CircuitParams, basis: &CompositeBasis) -> Result<SparseOperator> {
    params.validate()?;
    let ht = transmon_hamiltonian(params, &basis.transmon)?.matrix;
    let hp = ppq_hamiltonian(params, &basis.ppq)?.matrix;
    let (hx, hy) = ppq_error_hamiltonians(params, &basis.ppq)?;
    let hp = hp + hx.matrix + hy.matrix;
    let (dt, dp) = (basis.transmon.dim(), basis.ppq.dim());
    let mut trip = Vec::new();
    for a in 0..dt {
        for b in 0..dt {
            let v = ht[(a, b)];
            if v.norm() != 0.0 {
                for p in 0..dp {
                    trip.push((basis.index(a, p), basis.index(b, p), v));
                }
            }
        }
    }
    for p in 0..dp {
        for q in 0..dp {
            let v = hp[(p, q)];
            if v.norm() != 0.0 {
                for t in 0..dt {
                    trip.push((basis.index(t, p), basis.index(t, q), v));
                }
            }
        }
    }
    for i_t in 0..dt {
        let qt = basis.transmon.charge(i_t) as f64 - params.n_g_t;
        for i_p in 0..dp {
            let qp = basis.ppq.charge(i_p) as f64 - params.n_g_p;
            let v = 4.0 * params.e_c_c * qt * qp;
            if v != 0.0 {
                let i = basis.index(i_t, i_p);
                trip.push((i, i, c(v)));
            }
        }
    }
    Ok(SparseOperator::from_triplets(
        basis.dim(),
        trip,
        basis.descriptor(),
    ))
}

/// Uncoupled product label `|t_t, p_p⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct QubitLabel {
    pub t: usize,
    pub p: usize,
}

impl QubitLabel {
    pub const fn new(t: usize, p: usize) -> Self {
        Self { t, p }
    }
}

impl fmt::Display for QubitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.t, self.p)
    }
}

/// Computational subspace P₀ in operator order.
pub const COMPUTATIONAL: [QubitLabel; 4] = [
    QubitLabel::new(1, 1),
    QubitLabel::new(1, 0),
    QubitLabel::new(0, 1),
    QubitLabel::new(0, 0),
];

/// P₀ followed by the two non-computational levels |0_t,2_p⟩, |0_t,3_p⟩.
pub const SIX_LEVEL: [QubitLabel; 6] = [
    QubitLabel::new(1, 1),
    QubitLabel::new(1, 0),
    QubitLabel::new(0, 1),
    QubitLabel::new(0, 0),
    QubitLabel::new(0, 2),
    QubitLabel::new(0, 3),
];

/// Labeled, gauge-fixed single-island eigenstates and the island operators
/// in that eigenbasis.
#[derive(Clone, Debug)]
pub struct IslandStates {
    pub params: CircuitParams,
    pub flux: f64,
    pub transmon: Spectrum,
    pub ppq: Spectrum,
    /// `⟨i|n_t − n_g,t|j⟩`.
    pub n_t: CMatrix,
    /// `⟨i|cos φ_t|j⟩`.
    pub cos_t: CMatrix,
    /// `⟨i|n_p − n_g,p|j⟩`.
    pub n_p: CMatrix,
    pub cos_p: CMatrix,
    pub sin_p: CMatrix,
}

impl IslandStates {
    pub fn new(
        params: &CircuitParams,
        flux: f64,
        levels_t: usize,
        levels_p: usize,
    ) -> Result<Self> {
        Self::with_cutoff(params, flux, levels_t, levels_p, DEFAULT_CUTOFF)
    }

    pub fn with_cutoff(
        params: &CircuitParams,
        flux: f64,
        levels_t: usize,
        levels_p: usize,
        cutoff: usize,
    ) -> Result<Self> {
        params.validate()?;
        if !(0.0..=0.5).contains(&flux) {
            return Err(Error::InvalidArgument(format!(
                "flux {flux} outside [0, 0.5]"
            )));
        }
        let bt = ChargeBasis::transmon(cutoff)?;
        let bp = ChargeBasis::ppq(cutoff)?;
        let transmon = transmon_spectrum(params, &bt, flux, levels_t)?;
        let ppq = ppq_spectrum(params, &bp, levels_p)?;
        let proj = |s: &Spectrum, m: &CMatrix| s.eigenvectors.adjoint() * m * &s.eigenvectors;
        Ok(Self {
            n_t: proj(&transmon, &number_operator(&bt, params.n_g_t).matrix),
            cos_t: proj(&transmon, &cos_phi(&bt, 1)?.matrix),
            n_p: proj(&ppq, &number_operator(&bp, params.n_g_p).matrix),
            cos_p: proj(&ppq, &cos_phi(&bp, 1)?.matrix),
            sin_p: proj(&ppq, &sin_phi(&bp, 1)?.matrix),
            params: *params,
            flux,
            transmon,
            ppq,
        })
    }

    /// Uncoupled frequency `ω_{ss'}` relative to `|0_t,0_p⟩`.
    pub fn frequency(&self, l: QubitLabel) -> f64 {
        self.transmon.transition(l.t) + self.ppq.transition(l.p)
    }

    /// `⟨a|H_c|b⟩` from the factorized coupling.
    pub fn coupling_element(&self, a: QubitLabel, b: QubitLabel) -> Complex64 {
        self.n_t[(a.t, b.t)] * self.n_p[(a.p, b.p)] * (4.0 * self.params.e_c_c)
    }

    /// `⟨a|H^x + H^y|b⟩` (PPQ-local).
    pub fn error_element(&self, a: QubitLabel, b: QubitLabel) -> Complex64 {
        if a.t != b.t {
            return c(0.0);
        }
        self.cos_p[(a.p, b.p)] * (-self.params.eps_x)
            + self.sin_p[(a.p, b.p)] * (-self.params.eps_y)
    }
}

/// Frequencies `ω_{ss'}` of the six low-energy labels (relative to ω₀₀).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LowEnergyLabels {
    pub labels: [QubitLabel; 6],
    pub frequencies: [f64; 6],
}

impl LowEnergyLabels {
    pub fn from_states(states: &IslandStates) -> Self {
        let mut frequencies = [0.0; 6];
        for (f, l) in frequencies.iter_mut().zip(SIX_LEVEL) {
            *f = states.frequency(l);
        }
        Self {
            labels: SIX_LEVEL,
            frequencies,
        }
    }

    pub fn omega(&self, t: usize, p: usize) -> f64 {
        let i = self
            .labels
            .iter()
            .position(|l| l.t == t && l.p == p)
            .expect("label in the six-level set");
        self.frequencies[i]
    }
}

/// Real coupling constants of the low-energy model (rad/s).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CouplingElements {
    /// λ′ = ⟨1_t1_p|H_c|0_t2_p⟩.
    pub lambda1: f64,
    /// λ″ = −⟨1_t0_p|H_c|0_t3_p⟩.
    pub lambda2: f64,
    /// η′ = i⟨1_t1_p|H_c|0_t1_p⟩.
    pub eta1: f64,
    /// η″ = −i⟨1_t0_p|H_c|0_t0_p⟩.
    pub eta2: f64,
    /// κ = ⟨0_t0_p|H^y|0_t2_p⟩.
    pub kappa: f64,
    /// ⟨0_t1_p|H^y|0_t3_p⟩, equal to κ by charge-conjugation symmetry at
    /// n_g,p = 0.
    pub kappa_alt: f64,
    /// χ = ⟨0_t2_p|H^x|0_t3_p⟩.
    pub chi: f64,
    /// σ^x coefficient of the PPQ error term, Re⟨0_p|H^x|1_p⟩.
    pub dh_x: f64,
    /// σ^y coefficient of the PPQ error term, Im⟨0_p|H^y|1_p⟩.
    pub dh_y: f64,
    /// Largest discarded imaginary (or real) part, relative to the
    /// largest element.
    pub imag_residue: f64,
    /// False when error amplitudes are on, so the labeled PPQ states are
    /// no longer exact eigenstates of the PPQ.
    pub parity_protected: bool,
}

impl CouplingElements {
    pub fn from_states(s: &IslandStates) -> Self {
        let l = QubitLabel::new;
        let z_l1 = s.coupling_element(l(1, 1), l(0, 2));
        let z_l2 = -s.coupling_element(l(1, 0), l(0, 3));
        let z_e1 = Complex64::new(0.0, 1.0) * s.coupling_element(l(1, 1), l(0, 1));
        let z_e2 = Complex64::new(0.0, -1.0) * s.coupling_element(l(1, 0), l(0, 0));
        let eps_y = s.params.eps_y;
        let eps_x = s.params.eps_x;
        let z_k = s.sin_p[(0, 2)] * (-eps_y);
        let z_k2 = s.sin_p[(1, 3)] * (-eps_y);
        let z_chi = s.cos_p[(2, 3)] * (-eps_x);
        let z_hx = s.cos_p[(0, 1)] * (-eps_x);
        let z_hy = s.sin_p[(0, 1)] * (-eps_y);
        let real = [z_l1, z_l2, z_e1, z_e2, z_k, z_k2, z_chi];
        let scale = real
            .iter()
            .chain([z_hx, z_hy].iter())
            .map(|z| z.norm())
            .fold(f64::MIN_POSITIVE, f64::max);
        let residue = real
            .iter()
            .map(|z| z.im.abs())
            .fold(z_hx.im.abs(), f64::max)
            / scale;
        Self {
            lambda1: z_l1.re,
            lambda2: z_l2.re,
            eta1: z_e1.re,
            eta2: z_e2.re,
            kappa: z_k.re,
            kappa_alt: z_k2.re,
            chi: z_chi.re,
            dh_x: z_hx.re,
            dh_y: z_hy.im,
            imag_residue: residue,
            parity_protected: eps_x == 0.0 && eps_y == 0.0,
        }
    }

    /// σ^y_t coefficient g^y = (η′ − η″)/2.
    pub fn g_y(&self) -> f64 {
        0.5 * (self.eta1 - self.eta2)
    }

    /// σ^y_t σ^z_p coefficient g^yz = (η′ + η″)/2.
    pub fn g_yz(&self) -> f64 {
        0.5 * (self.eta1 + self.eta2)
    }
}

/// All coupling constants at the given transmon flux and the offset charges
/// in `params`.
pub fn coupling_matrix_elements(params: &CircuitParams, flux: f64) -> Result<CouplingElements> {
    let states = IslandStates::new(params, flux, 2, 4)?;
    Ok(CouplingElements::from_states(&states))
}

/// Projection of the full Hamiltonian onto the six uncoupled labels.
#[derive(Clone, Debug)]
pub struct LowEnergyModel {
    /// In [`SIX_LEVEL`] order, energies relative to the uncoupled ground.
    pub matrix: CMatrix,
    pub labels: LowEnergyLabels,
    pub parity: [Parity; 6],
}

pub fn low_energy_hamiltonian(params: &CircuitParams, flux: f64) -> Result<LowEnergyModel> {
    let states = IslandStates::new(params, flux, 2, 4)?;
    Ok(low_energy_from_states(&states))
}

pub fn low_energy_from_states(states: &IslandStates) -> LowEnergyModel {
    let labels = LowEnergyLabels::from_states(states);
    let mut m = CMatrix::zeros(6, 6);
    for (i, a) in SIX_LEVEL.iter().enumerate() {
        for (j, b) in SIX_LEVEL.iter().enumerate() {
            let mut v = states.coupling_element(*a, *b) + states.error_element(*a, *b);
            if i == j {
                v += c(labels.frequencies[i]);
            }
            m[(i, j)] = v;
        }
    }
    let pp = states
        .ppq
        .parity
        .clone()
        .expect("ppq spectrum carries parity");
    let mut parity = [Parity::Mixed; 6];
    for (p, l) in parity.iter_mut().zip(SIX_LEVEL) {
        *p = pp[l.p];
    }
    LowEnergyModel {
        matrix: m,
        labels,
        parity,
    }
}

/// Coupled Hamiltonian in a truncated basis of uncoupled product
/// eigenstates (transmon eigenstates at `basis_flux`), PPQ index fastest.
#[derive(Clone, Debug)]
pub struct ProductModel {
    pub states: IslandStates,
    pub levels_t: usize,
    pub levels_p: usize,
}

/// Default truncation of the product model.
pub const DEFAULT_LEVELS_T: usize = 6;
pub const DEFAULT_LEVELS_P: usize = 14;

impl ProductModel {
    pub fn new(
        params: &CircuitParams,
        basis_flux: f64,
        levels_t: usize,
        levels_p: usize,
    ) -> Result<Self> {
        if levels_t < 2 || levels_p < 4 {
            return Err(Error::InvalidArgument(
                "product model needs at least 2 transmon and 4 PPQ levels".into(),
            ));
        }
        let states = IslandStates::new(params, basis_flux, levels_t, levels_p)?;
        Ok(Self {
            states,
            levels_t,
            levels_p,
        })
    }

    /// Instantaneous eigenbasis at the flux in `params`.
    pub fn at(params: &CircuitParams) -> Result<Self> {
        Self::new(params, params.flux, DEFAULT_LEVELS_T, DEFAULT_LEVELS_P)
    }

    pub fn dim(&self) -> usize {
        self.levels_t * self.levels_p
    }

    pub fn index(&self, l: QubitLabel) -> usize {
        l.t * self.levels_p + l.p
    }

    pub fn basis(&self) -> BasisDescriptor {
        BasisDescriptor::Product {
            levels_t: self.levels_t,
            levels_p: self.levels_p,
        }
    }

    /// PPQ parity of every product basis state.
    pub fn parity(&self) -> Vec<Parity> {
        let pp = self
            .states
            .ppq
            .parity
            .as_ref()
            .expect("ppq spectrum carries parity");
        (0..self.dim()).map(|i| pp[i % self.levels_p]).collect()
    }

    pub(crate) fn transmon_block(&self, flux: f64) -> CMatrix {
        let s = &self.states;
        let e0 = s.transmon.eigenvalues[0];
        let mut h = CMatrix::zeros(self.levels_t, self.levels_t);
        for i in 0..self.levels_t {
            h[(i, i)] = c(s.transmon.eigenvalues[i] - e0);
        }
        let de = s.params.e_j_t_at(flux) - s.params.e_j_t_at(s.flux);
        if de != 0.0 {
            h -= &s.cos_t * c(de);
        }
        h
    }

    fn ppq_block(&self, eps_x: f64, eps_y: f64) -> CMatrix {
        let s = &self.states;
        let e0 = s.ppq.eigenvalues[0];
        let mut h = CMatrix::zeros(self.levels_p, self.levels_p);
        for i in 0..self.levels_p {
            h[(i, i)] = c(s.ppq.eigenvalues[i] - e0);
        }
        h - &s.cos_p * c(eps_x) - &s.sin_p * c(eps_y)
    }

    /// Full Hamiltonian at `flux` with the given error amplitudes and the
    /// coupling scaled by `coupling` (1 for the physical device, 0 for the
    /// uncoupled reference).
    pub fn hamiltonian_with(&self, flux: f64, eps_x: f64, eps_y: f64, coupling: f64) -> CMatrix {
        let it = CMatrix::identity(self.levels_t, self.levels_t);
        let ip = CMatrix::identity(self.levels_p, self.levels_p);
        let mut h =
            kron(&self.transmon_block(flux), &ip) + kron(&it, &self.ppq_block(eps_x, eps_y));
        if coupling != 0.0 {
            h += kron(&self.states.n_t, &self.states.n_p)
                * c(4.0 * self.states.params.e_c_c * coupling);
        }
        h
    }

    /// Coupled Hamiltonian at the basis flux with the errors in `params`.
    pub fn hamiltonian(&self) -> Operator {
        let p = &self.states.params;
        Operator {
            matrix: self.hamiltonian_with(self.states.flux, p.eps_x, p.eps_y, 1.0),
            basis: self.basis(),
        }
    }

    /// Uncoupled, error-free reference Hamiltonian (diagonal).
    pub fn uncoupled(&self) -> Operator {
        Operator {
            matrix: self.hamiltonian_with(self.states.flux, 0.0, 0.0, 0.0),
            basis: self.basis(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Anticrossing {
    /// |1_t,1_p⟩ ↔ |0_t,2_p⟩.
    Eleven02,
    /// |1_t,0_p⟩ ↔ |0_t,3_p⟩.
    Ten03,
}

impl Anticrossing {
    pub fn labels(&self) -> (QubitLabel, QubitLabel) {
        match self {
            Anticrossing::Eleven02 => (QubitLabel::new(1, 1), QubitLabel::new(0, 2)),
            Anticrossing::Ten03 => (QubitLabel::new(1, 0), QubitLabel::new(0, 3)),
        }
    }
}

impl fmt::Display for Anticrossing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.labels();
        write!(f, "|{a}> and |{b}>")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AnticrossingResult {
    pub which: Anticrossing,
    /// Flux of the minimal coupled gap.
    pub flux: f64,
    /// Root of the uncoupled detuning.
    pub uncoupled_flux: f64,
    /// Minimal coupled gap, rad/s.
    pub gap: f64,
    /// |⟨a|H_c|b⟩| of the crossing labels at `flux`.
    pub coupling: f64,
}

const FLUX_TOL: f64 = 1e-6;

pub(crate) fn uncoupled_detuning(
    params: &CircuitParams,
    which: Anticrossing,
    flux: f64,
) -> Result<f64> {
    let s = IslandStates::new(params, flux, 2, 4)?;
    let (a, b) = which.labels();
    Ok(s.frequency(a) - s.frequency(b))
}

/// Gap between the two coupled levels carrying most weight on the labels
/// of `which`.
pub fn coupled_gap(params: &CircuitParams, which: Anticrossing, flux: f64) -> Result<f64> {
    let model = ProductModel::new(
        &params.with_flux(flux),
        flux,
        DEFAULT_LEVELS_T,
        DEFAULT_LEVELS_P,
    )?;
    let (values, vectors) = eigh(&model.hamiltonian().matrix);
    let (a, b) = which.labels();
    let (ia, ib) = (model.index(a), model.index(b));
    let mut weights: Vec<(f64, usize)> = (0..values.len())
        .map(|k| (vectors[(ia, k)].norm_sqr() + vectors[(ib, k)].norm_sqr(), k))
        .collect();
    weights.sort_by(|x, y| y.0.total_cmp(&x.0));
    Ok((values[weights[0].1] - values[weights[1].1]).abs())
}

/// Bisection of the uncoupled detuning followed by golden-section
/// minimization of the coupled gap.
pub fn locate_anticrossing(
    params: &CircuitParams,
    which: Anticrossing,
) -> Result<AnticrossingResult> {
    let lo_val = uncoupled_detuning(params, which, 0.0)?;
    let hi_val = uncoupled_detuning(params, which, 0.5)?;
    if lo_val.signum() == hi_val.signum() {
        return Err(Error::NoAnticrossing {
            which: which.to_string(),
        });
    }
    let (mut lo, mut hi) = (0.0, 0.5);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if uncoupled_detuning(params, which, mid)?.signum() == lo_val.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let root = 0.5 * (lo + hi);
    let width = 0.03;
    let (flux, gap) = golden_min(
        |f| coupled_gap(params, which, f),
        (root - width).max(0.0),
        (root + width).min(0.5),
        FLUX_TOL,
    )?;
    let s = IslandStates::new(params, flux, 2, 4)?;
    let (a, b) = which.labels();
    Ok(AnticrossingResult {
        which,
        flux,
        uncoupled_flux: root,
        gap,
        coupling: s.coupling_element(a, b).norm(),
    })
}

/// Golden-section minimum of a unimodal function on `[a, b]`.
pub fn golden_min<F>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while b - a > tol {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2)?;
        }
    }
    Ok(if f1 < f2 { (x1, f1) } else { (x2, f2) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::eigendecompose;
    use crate::spectra::lanczos::{lanczos, LanczosOptions};
    use crate::units::ghz;

    #[test]
    fn coupling_zero_without_capacitance() {
        let b = CompositeBasis::with_cutoffs(3, 3).unwrap();
        let p = CircuitParams::reference()
            .with_coupling(0.0)
            .with_n_g_p(0.3);
        assert_eq!(coupling_hamiltonian(&b, &p).nnz(), 0);
    }

    #[test]
    fn uncoupled_spectrum_is_sum() {
        let b = CompositeBasis::with_cutoffs(6, 6).unwrap();
        let p = CircuitParams::reference()
            .with_coupling(0.0)
            .with_n_g_p(0.2);
        let full = assemble_full(&p, &b).unwrap();
        let op = Operator::new(full.to_dense(), b.descriptor()).unwrap();
        let s = eigendecompose(&op, 6).unwrap();
        let t = transmon_spectrum(&p, &b.transmon, 0.0, 4).unwrap();
        let q = ppq_spectrum(&p, &b.ppq, 6).unwrap();
        let mut sums: Vec<f64> = t
            .eigenvalues
            .iter()
            .flat_map(|x| q.eigenvalues.iter().map(move |y| x + y))
            .collect();
        sums.sort_by(f64::total_cmp);
        for i in 0..6 {
            assert!((s.eigenvalues[i] - sums[i]).abs() < 1e-9 * sums[i].abs());
        }
    }

    #[test]
    fn lanczos_agrees_with_dense_on_composite() {
        let b = CompositeBasis::with_cutoffs(8, 8).unwrap();
        let p = CircuitParams::reference();
        let full = assemble_full(&p, &b).unwrap();
        let op = Operator::new(full.to_dense(), b.descriptor()).unwrap();
        let dense = eigendecompose(&op, 6).unwrap();
        let it = lanczos(&full, 6, LanczosOptions::default()).unwrap();
        for i in 0..6 {
            let rel = (dense.eigenvalues[i] - it.eigenvalues[i]).abs() / dense.eigenvalues[i].abs();
            assert!(rel < 1e-8, "{i}: {rel}");
        }
        assert_eq!(it.parity.unwrap()[0], Parity::Even);
    }

    #[test]
    fn parity_forbidden_elements_vanish() {
        let p = CircuitParams::reference();
        let s = IslandStates::new(&p, 0.0, 2, 4).unwrap();
        let l = QubitLabel::new;
        assert!(s.coupling_element(l(1, 0), l(0, 2)).norm() < 1e-10 * p.e_c_c);
        assert!(s.coupling_element(l(1, 1), l(0, 3)).norm() < 1e-10 * p.e_c_c);
        let e = CouplingElements::from_states(&s);
        assert!(e.eta1.abs() < 1e-10 * p.e_c_c && e.eta2.abs() < 1e-10 * p.e_c_c);
        assert!(e.imag_residue < 1e-9);
    }

    #[test]
    fn computational_block_of_coupling_vanishes_at_zero_offset() {
        let p = CircuitParams::reference();
        let s = IslandStates::new(&p, 0.0, 2, 4).unwrap();
        for a in COMPUTATIONAL {
            for b in COMPUTATIONAL {
                assert!(s.coupling_element(a, b).norm() < 1e-10 * p.e_c_c);
            }
        }
    }

    #[test]
    fn sweet_spot_couplings_equal() {
        let p = CircuitParams::reference().with_n_g_p(0.5);
        let e = coupling_matrix_elements(&p, 0.0).unwrap();
        assert!((e.lambda1.abs() - e.lambda2.abs()).abs() < 1e-9 * e.lambda1.abs());
    }

    #[test]
    fn anticrossings_are_distinct() {
        let p = CircuitParams::reference();
        let a = locate_anticrossing(&p, Anticrossing::Eleven02).unwrap();
        let b = locate_anticrossing(&p, Anticrossing::Ten03).unwrap();
        assert!(a.flux > 0.0 && a.flux < 0.5 && b.flux > 0.0 && b.flux < 0.5);
        assert!((a.flux - b.flux).abs() > 0.01);
        assert!((b.gap - 2.0 * b.coupling).abs() < 0.1 * 2.0 * b.coupling);
    }

    #[test]
    fn no_anticrossing_when_transmon_too_low() {
        let mut p = CircuitParams::reference();
        p.e_j_t = ghz(2.0);
        assert!(matches!(
            locate_anticrossing(&p, Anticrossing::Ten03),
            Err(Error::NoAnticrossing { .. })
        ));
    }

    #[test]
    fn golden_section_finds_parabola_minimum() {
        let (x, fx) = golden_min(|x| Ok((x - 0.3) * (x - 0.3) + 1.0), 0.0, 1.0, 1e-9).unwrap();
        assert!((x - 0.3).abs() < 1e-7 && (fx - 1.0).abs() < 1e-12);
    }
}
