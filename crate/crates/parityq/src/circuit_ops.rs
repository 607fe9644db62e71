//! Charge-basis operators and the bare single-island Hamiltonians.
//!
//! Charge-shift convention: `T_k |n⟩ = |n + k⟩`, i.e. the entry sits at
//! row `n + k`, column `n`. Then `cos kφ = (T_k + T_k†)/2` and
//! `sin kφ = (T_k − T_k†)/(2i)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, hermiticity_defect, max_abs, CMatrix};
use crate::units::ghz;

pub const DEFAULT_CUTOFF: usize = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Island {
    Transmon,
    Ppq,
}

/// Cooper-pair number basis `n ∈ [−N, N]` of one island.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChargeBasis {
    cutoff: usize,
    island: Island,
}

impl ChargeBasis {
    pub fn new(cutoff: usize, island: Island) -> Result<Self> {
        if cutoff < 2 {
            return Err(Error::InvalidArgument(format!(
                "charge cutoff must be at least 2, got {cutoff}"
            )));
        }
        Ok(Self { cutoff, island })
    }

    pub fn transmon(cutoff: usize) -> Result<Self> {
        Self::new(cutoff, Island::Transmon)
    }

    pub fn ppq(cutoff: usize) -> Result<Self> {
        Self::new(cutoff, Island::Ppq)
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn island(&self) -> Island {
        self.island
    }

    pub fn dim(&self) -> usize {
        2 * self.cutoff + 1
    }

    /// Cooper-pair number of basis index `i`.
    pub fn charge(&self, i: usize) -> i64 {
        i as i64 - self.cutoff as i64
    }

    pub fn is_even(&self, i: usize) -> bool {
        self.charge(i).rem_euclid(2) == 0
    }
}

/// Device energies (rad/s), offset charges, reduced flux Φ/Φ₀ and the
/// single-Cooper-pair error amplitudes of the PPQ.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitParams {
    pub e_j_t: f64,
    pub e_c_t: f64,
    pub e_j_p: f64,
    pub e_c_p: f64,
    pub e_c_c: f64,
    pub n_g_t: f64,
    pub n_g_p: f64,
    pub flux: f64,
    pub eps_x: f64,
    pub eps_y: f64,
}

impl CircuitParams {
    /// Energies given as ordinary frequencies in GHz; offsets, flux and
    /// error amplitudes start at zero.
    pub fn from_ghz(e_j_t: f64, e_c_t: f64, e_j_p: f64, e_c_p: f64, e_c_c: f64) -> Self {
        Self {
            e_j_t: ghz(e_j_t),
            e_c_t: ghz(e_c_t),
            e_j_p: ghz(e_j_p),
            e_c_p: ghz(e_c_p),
            e_c_c: ghz(e_c_c),
            n_g_t: 0.0,
            n_g_p: 0.0,
            flux: 0.0,
            eps_x: 0.0,
            eps_y: 0.0,
        }
    }

    /// Reference hybrid device: 2π(12, 0.2, 2.7, 0.15, 0.025) GHz.
    pub fn reference() -> Self {
        Self::from_ghz(12.0, 0.2, 2.7, 0.15, 0.025)
    }

    pub fn with_n_g_p(mut self, n_g: f64) -> Self {
        self.n_g_p = n_g;
        self
    }

    pub fn with_n_g_t(mut self, n_g: f64) -> Self {
        self.n_g_t = n_g;
        self
    }

    pub fn with_flux(mut self, flux: f64) -> Self {
        self.flux = flux;
        self
    }

    pub fn with_coupling(mut self, e_c_c: f64) -> Self {
        self.e_c_c = e_c_c;
        self
    }

    pub fn with_errors(mut self, eps_x: f64, eps_y: f64) -> Self {
        self.eps_x = eps_x;
        self.eps_y = eps_y;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let energies = [
            ("e_j_t", self.e_j_t),
            ("e_c_t", self.e_c_t),
            ("e_j_p", self.e_j_p),
            ("e_c_p", self.e_c_p),
            ("e_c_c", self.e_c_c),
        ];
        for (name, v) in energies {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "{name} must be finite and >= 0"
                )));
            }
        }
        if self.e_c_t <= 0.0 || self.e_c_p <= 0.0 {
            return Err(Error::InvalidArgument(
                "charging energies must be > 0".into(),
            ));
        }
        if !(0.0..=0.5).contains(&self.flux) {
            return Err(Error::InvalidArgument(format!(
                "flux {} outside [0, 0.5]",
                self.flux
            )));
        }
        for (name, v) in [
            ("n_g_t", self.n_g_t),
            ("n_g_p", self.n_g_p),
            ("eps_x", self.eps_x),
            ("eps_y", self.eps_y),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidArgument(format!("{name} must be finite")));
            }
        }
        Ok(())
    }

    /// Transmon Josephson energy at the given flux (symmetric SQUID).
    pub fn e_j_t_at(&self, flux: f64) -> f64 {
        self.e_j_t * (PI * flux).cos().abs()
    }
}

/// Basis metadata attached to an [`Operator`].
#[derive(Clone, Debug, PartialEq)]
pub enum BasisDescriptor {
    Charge(ChargeBasis),
    /// Transmon charge basis ⊗ PPQ charge basis, PPQ index fastest.
    Composite(ChargeBasis, ChargeBasis),
    /// Truncated product of single-island eigenstates, PPQ index fastest.
    Product {
        levels_t: usize,
        levels_p: usize,
    },
    /// Anything else of the given dimension.
    Generic(usize),
}

impl BasisDescriptor {
    pub fn dim(&self) -> usize {
        match self {
            BasisDescriptor::Charge(b) => b.dim(),
            BasisDescriptor::Composite(t, p) => t.dim() * p.dim(),
            BasisDescriptor::Product { levels_t, levels_p } => levels_t * levels_p,
            BasisDescriptor::Generic(d) => *d,
        }
    }
}

/// Hermitian matrix with its basis.
#[derive(Clone, Debug)]
pub struct Operator {
    pub matrix: CMatrix,
    pub basis: BasisDescriptor,
}

impl Operator {
    /// Checks shape and hermiticity (max |M − M†| < 1e-12 · max |M|).
    pub fn new(matrix: CMatrix, basis: BasisDescriptor) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() != basis.dim() {
            return Err(Error::InvalidArgument(format!(
                "matrix {}x{} does not match basis dimension {}",
                matrix.nrows(),
                matrix.ncols(),
                basis.dim()
            )));
        }
        let defect = hermiticity_defect(&matrix);
        if defect > 1e-12 * max_abs(&matrix) {
            return Err(Error::NotHermitian { defect });
        }
        Ok(Self { matrix, basis })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn norm(&self) -> f64 {
        self.matrix.norm()
    }
}

/// Diagonal `n − n_g`.
pub fn number_operator(basis: &ChargeBasis, n_g: f64) -> Operator {
    let d = basis.dim();
    let mut m = CMatrix::zeros(d, d);
    for i in 0..d {
        m[(i, i)] = c(basis.charge(i) as f64 - n_g);
    }
    Operator {
        matrix: m,
        basis: BasisDescriptor::Charge(*basis),
    }
}

/// Shift matrix `T_k = e^{ikφ}` (not hermitian).
pub fn charge_translation(basis: &ChargeBasis, k: usize) -> Result<CMatrix> {
    if k == 0 || k > basis.cutoff() {
        return Err(Error::InvalidArgument(format!(
            "shift {k} must lie in [1, {}]",
            basis.cutoff()
        )));
    }
    let d = basis.dim();
    let mut t = CMatrix::zeros(d, d);
    for i in 0..d - k {
        t[(i + k, i)] = c(1.0);
    }
    Ok(t)
}

pub fn cos_phi(basis: &ChargeBasis, k: usize) -> Result<Operator> {
    let t = charge_translation(basis, k)?;
    let m = (&t + t.adjoint()) * c(0.5);
    Ok(Operator {
        matrix: m,
        basis: BasisDescriptor::Charge(*basis),
    })
}

pub fn sin_phi(basis: &ChargeBasis, k: usize) -> Result<Operator> {
    let t = charge_translation(basis, k)?;
    let m = (&t - t.adjoint()) * Complex64::new(0.0, -0.5);
    Ok(Operator {
        matrix: m,
        basis: BasisDescriptor::Charge(*basis),
    })
}

/// Cooper-pair parity `Π = diag((−1)^n)`.
pub fn parity_operator(basis: &ChargeBasis) -> Operator {
    let d = basis.dim();
    let mut m = CMatrix::zeros(d, d);
    for i in 0..d {
        m[(i, i)] = c(if basis.is_even(i) { 1.0 } else { -1.0 });
    }
    Operator {
        matrix: m,
        basis: BasisDescriptor::Charge(*basis),
    }
}

fn expect_island(basis: &ChargeBasis, island: Island) -> Result<()> {
    if basis.island() != island {
        return Err(Error::InvalidArgument(format!(
            "expected a {island:?} basis, got {:?}",
            basis.island()
        )));
    }
    Ok(())
}

/// `4E_C(n − n_g)² − E_J(Φ) cos φ` with the transmon flux taken from `flux`.
pub fn transmon_hamiltonian_at(
    params: &CircuitParams,
    basis: &ChargeBasis,
    flux: f64,
) -> Result<Operator> {
    expect_island(basis, Island::Transmon)?;
    let d = basis.dim();
    let e_j = params.e_j_t_at(flux);
    let mut m = cos_phi(basis, 1)?.matrix * c(-e_j);
    for i in 0..d {
        let q = basis.charge(i) as f64 - params.n_g_t;
        m[(i, i)] += c(4.0 * params.e_c_t * q * q);
    }
    Operator::new(m, BasisDescriptor::Charge(*basis))
}

pub fn transmon_hamiltonian(params: &CircuitParams, basis: &ChargeBasis) -> Result<Operator> {
    transmon_hamiltonian_at(params, basis, params.flux)
}

/// `4E_C,p(n − n_g,p)² − E_J,p cos 2φ`.
pub fn ppq_hamiltonian(params: &CircuitParams, basis: &ChargeBasis) -> Result<Operator> {
    expect_island(basis, Island::Ppq)?;
    let d = basis.dim();
    let mut m = cos_phi(basis, 2)?.matrix * c(-params.e_j_p);
    for i in 0..d {
        let q = basis.charge(i) as f64 - params.n_g_p;
        m[(i, i)] += c(4.0 * params.e_c_p * q * q);
    }
    Operator::new(m, BasisDescriptor::Charge(*basis))
}

/// `(H^x, H^y) = (−ε^x cos φ, −ε^y sin φ)` on the PPQ island.
pub fn ppq_error_hamiltonians(
    params: &CircuitParams,
    basis: &ChargeBasis,
) -> Result<(Operator, Operator)> {
    expect_island(basis, Island::Ppq)?;
    let hx = cos_phi(basis, 1)?.matrix * c(-params.eps_x);
    let hy = sin_phi(basis, 1)?.matrix * c(-params.eps_y);
    Ok((
        Operator::new(hx, BasisDescriptor::Charge(*basis))?,
        Operator::new(hy, BasisDescriptor::Charge(*basis))?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::commutator;

    fn diag_re(op: &Operator) -> Vec<f64> {
        (0..op.dim()).map(|i| op.matrix[(i, i)].re).collect()
    }

    #[test]
    fn number_operator_examples() {
        let b = ChargeBasis::ppq(2).unwrap();
        assert_eq!(
            diag_re(&number_operator(&b, 0.0)),
            vec![-2.0, -1.0, 0.0, 1.0, 2.0]
        );
        assert_eq!(
            diag_re(&number_operator(&b, 0.5)),
            vec![-2.5, -1.5, -0.5, 0.5, 1.5]
        );
        for n in 2..8 {
            let b = ChargeBasis::transmon(n).unwrap();
            assert_eq!(number_operator(&b, 0.0).matrix.trace().re, 0.0);
        }
    }

    #[test]
    fn cutoff_must_be_at_least_two() {
        assert!(ChargeBasis::ppq(1).is_err());
        assert_eq!(ChargeBasis::ppq(2).unwrap().dim(), 5);
    }

    #[test]
    fn translation_shifts_charge_up() {
        let b = ChargeBasis::ppq(2).unwrap();
        let t = charge_translation(&b, 1).unwrap();
        // |n=0⟩ (index 2) goes to |n=1⟩ (index 3)
        assert_eq!(t[(3, 2)], c(1.0));
        assert_eq!(t[(2, 3)], c(0.0));
        assert_eq!(t.iter().filter(|z| z.norm() > 0.0).count(), 4);
        assert!(charge_translation(&b, 3).is_err());
        assert!(charge_translation(&b, 0).is_err());
    }

    #[test]
    fn cos_and_sin_are_hermitian() {
        let b = ChargeBasis::ppq(4).unwrap();
        for k in 1..=2 {
            let cs = cos_phi(&b, k).unwrap();
            let sn = sin_phi(&b, k).unwrap();
            assert_eq!(hermiticity_defect(&cs.matrix), 0.0);
            assert_eq!(hermiticity_defect(&sn.matrix), 0.0);
            assert!((0..b.dim()).all(|i| sn.matrix[(i, i)].norm() == 0.0));
        }
    }

    #[test]
    fn transmon_without_josephson_is_diagonal() {
        let mut p = CircuitParams::reference();
        p.e_j_t = 0.0;
        let h = transmon_hamiltonian(&p, &ChargeBasis::transmon(5).unwrap()).unwrap();
        let off: f64 = (0..11)
            .flat_map(|i| (0..11).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| h.matrix[(i, j)].norm())
            .sum();
        assert_eq!(off, 0.0);
    }

    #[test]
    fn flux_half_switches_off_josephson() {
        let p = CircuitParams::reference();
        assert!(p.e_j_t_at(0.5).abs() < 1e-9 * p.e_j_t);
    }

    #[test]
    fn ppq_commutes_with_parity() {
        let p = CircuitParams::reference().with_n_g_p(0.23);
        let b = ChargeBasis::ppq(DEFAULT_CUTOFF).unwrap();
        let h = ppq_hamiltonian(&p, &b).unwrap();
        let pi = parity_operator(&b);
        assert!(max_abs(&commutator(&h.matrix, &pi.matrix)) < 1e-12 * h.norm());
    }

    #[test]
    fn error_terms_flip_parity() {
        let p = CircuitParams::reference().with_errors(1.0, 2.0);
        let b = ChargeBasis::ppq(6).unwrap();
        let (hx, hy) = ppq_error_hamiltonians(&p, &b).unwrap();
        let pi = parity_operator(&b).matrix;
        for h in [&hx.matrix, &hy.matrix] {
            let flipped = &pi * h * &pi;
            assert!(max_abs(&(flipped + h)) < 1e-15);
            assert!(max_abs(h) > 0.0);
        }
        let zero = CircuitParams::reference();
        let (hx, hy) = ppq_error_hamiltonians(&zero, &b).unwrap();
        assert_eq!(max_abs(&hx.matrix) + max_abs(&hy.matrix), 0.0);
    }

    #[test]
    fn island_label_is_checked() {
        let p = CircuitParams::reference();
        assert!(ppq_hamiltonian(&p, &ChargeBasis::transmon(4).unwrap()).is_err());
        assert!(transmon_hamiltonian(&p, &ChargeBasis::ppq(4).unwrap()).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(CircuitParams::reference().validate().is_ok());
        assert!(CircuitParams::reference()
            .with_flux(0.6)
            .validate()
            .is_err());
        let mut p = CircuitParams::reference();
        p.e_c_p = 0.0;
        assert!(p.validate().is_err());
    }
}
