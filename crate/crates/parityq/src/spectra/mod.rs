//! Diagonalization, Cooper-pair parity labels and the labeled single-island
//! spectra with their anchor gauge.

mod duffing;
mod gauge;
pub mod lanczos;

pub use duffing::{design_condition, duffing_levels, DesignCheck, DuffingEstimate, Which};
pub use gauge::{
    ppq_n_g_sweep, smooth_gauge_fix, transmon_flux_sweep, transmon_n_g_sweep, SweepAxis,
    SweepResult,
};

use num_complex::Complex64;
use serde::Serialize;

use crate::circuit_ops::{
    number_operator, parity_operator, ppq_hamiltonian, transmon_hamiltonian_at, BasisDescriptor,
    ChargeBasis, CircuitParams, Island, Operator,
};
use crate::error::{Error, Result};
use crate::linalg::{eigh, hermiticity_defect, max_abs, CMatrix};

/// Parity threshold τ.
pub const PARITY_TOL: f64 = 1e-6;
/// Eigen-residual tolerance relative to ‖H‖.
pub const RESIDUAL_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
    Mixed,
}

impl Parity {
    pub fn as_str(&self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
            Parity::Mixed => "mixed",
        }
    }
}

/// Lowest eigenpairs of a Hamiltonian.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// One column per eigenvalue.
    pub eigenvectors: CMatrix,
    /// PPQ parity of each state, when the basis carries parity information.
    pub parity: Option<Vec<Parity>>,
    pub gauge_fixed: bool,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// `E_k − E_0`.
    pub fn transition(&self, k: usize) -> f64 {
        self.eigenvalues[k] - self.eigenvalues[0]
    }

    pub fn state(&self, k: usize) -> nalgebra::DVector<Complex64> {
        self.eigenvectors.column(k).into_owned()
    }
}

/// Classify from the weight on even-charge components.
pub fn classify_by_mask(state: &[Complex64], even: &[bool]) -> Parity {
    let total: f64 = state.iter().map(|z| z.norm_sqr()).sum();
    let w: f64 = state
        .iter()
        .zip(even)
        .filter(|(_, &e)| e)
        .map(|(z, _)| z.norm_sqr())
        .sum::<f64>()
        / total;
    if w > 1.0 - PARITY_TOL {
        Parity::Even
    } else if w < PARITY_TOL {
        Parity::Odd
    } else {
        Parity::Mixed
    }
}

/// Parity of a state over a PPQ charge basis.
pub fn classify_parity(state: &[Complex64], basis: &ChargeBasis) -> Parity {
    let mask: Vec<bool> = (0..basis.dim()).map(|i| basis.is_even(i)).collect();
    classify_by_mask(state, &mask)
}

/// Even-charge mask of the PPQ factor, if the basis has one.
pub fn ppq_parity_mask(basis: &BasisDescriptor) -> Option<Vec<bool>> {
    match basis {
        BasisDescriptor::Charge(b) if b.island() == Island::Ppq => {
            Some((0..b.dim()).map(|i| b.is_even(i)).collect())
        }
        BasisDescriptor::Composite(t, p) => Some(
            (0..t.dim() * p.dim())
                .map(|i| p.is_even(i % p.dim()))
                .collect(),
        ),
        _ => None,
    }
}

/// Multiply by a phase so the largest-magnitude component is real-positive.
/// Ties within 1e-8 resolve to the lowest index.
pub fn anchor_largest_component(v: &mut [Complex64]) {
    let max = v.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    if max == 0.0 {
        return;
    }
    let k = v
        .iter()
        .position(|z| z.norm() >= max * (1.0 - 1e-8))
        .unwrap_or(0);
    let phase = Complex64::from_polar(1.0, -v[k].arg());
    v.iter_mut().for_each(|z| *z *= phase);
}

pub(crate) fn anchor_columns(m: &mut CMatrix) {
    for mut col in m.column_iter_mut() {
        anchor_largest_component(col.as_mut_slice());
    }
}

/// Dense diagonalization; returns the `k` lowest pairs, each anchored on its
/// largest component.
pub fn eigendecompose(h: &Operator, k: usize) -> Result<Spectrum> {
    let n = h.dim();
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("k = {k} not in [1, {n}]")));
    }
    let defect = hermiticity_defect(&h.matrix);
    if defect > 1e-12 * max_abs(&h.matrix) {
        return Err(Error::NotHermitian { defect });
    }
    let (values, vectors) = eigh(&h.matrix);
    let mut vecs = vectors.columns(0, k).into_owned();
    anchor_columns(&mut vecs);
    let values: Vec<f64> = values[..k].to_vec();
    check_residuals(&h.matrix, &values, &vecs)?;
    let parity = ppq_parity_mask(&h.basis).map(|mask| {
        vecs.column_iter()
            .map(|col| classify_by_mask(col.as_slice(), &mask))
            .collect()
    });
    Ok(Spectrum {
        eigenvalues: values,
        eigenvectors: vecs,
        parity,
        gauge_fixed: false,
    })
}

fn check_residuals(h: &CMatrix, values: &[f64], vecs: &CMatrix) -> Result<()> {
    let scale = h.norm().max(f64::MIN_POSITIVE);
    let mut worst: f64 = 0.0;
    for (j, &e) in values.iter().enumerate() {
        let v = vecs.column(j);
        let r = h * v - v * Complex64::new(e, 0.0);
        worst = worst.max(r.norm());
    }
    if worst > RESIDUAL_TOL * scale {
        return Err(Error::NoConvergence {
            iterations: 0,
            residual: worst / scale,
        });
    }
    Ok(())
}

/// Rephase column `target` (either the bra `a` or the ket `b`) so that
/// `⟨a|op|b⟩` is positive imaginary.
fn make_element_imaginary(vecs: &mut CMatrix, op: &CMatrix, a: usize, b: usize, target: usize) {
    let x = (vecs.column(a).adjoint() * op * vecs.column(b))[(0, 0)];
    if x.norm() == 0.0 {
        return;
    }
    let theta = std::f64::consts::FRAC_PI_2 - x.arg();
    let theta = if target == a { -theta } else { theta };
    let mut col = vecs.column_mut(target);
    col *= Complex64::from_polar(1.0, theta);
}

/// Lowest `k` transmon states at `flux`, anchor gauge applied:
/// `⟨0_t|n|1_t⟩` is positive imaginary, other states are anchored on their
/// largest charge amplitude.
pub fn transmon_spectrum(
    params: &CircuitParams,
    basis: &ChargeBasis,
    flux: f64,
    k: usize,
) -> Result<Spectrum> {
    let h = transmon_hamiltonian_at(params, basis, flux)?;
    let mut s = eigendecompose(&h, k)?;
    if k >= 2 {
        let n = number_operator(basis, 0.0).matrix;
        make_element_imaginary(&mut s.eigenvectors, &n, 0, 1, 1);
    }
    s.gauge_fixed = true;
    Ok(s)
}

/// Lowest `k` PPQ states at `params.n_g_p` (without error terms).
///
/// Degenerate clusters are resolved by diagonalizing Π inside the cluster
/// and ordered by ascending `⟨n − n_g⟩`. Anchor gauge: `⟨2_p|n|1_p⟩` and
/// `⟨3_p|n|0_p⟩` positive imaginary, other states anchored on their largest
/// charge amplitude.
pub fn ppq_spectrum(params: &CircuitParams, basis: &ChargeBasis, k: usize) -> Result<Spectrum> {
    let h = ppq_hamiltonian(params, basis)?;
    let full = eigendecompose(&h, (k + 1).min(h.dim()))?;
    let mut values = full.eigenvalues.clone();
    let mut vecs = full.eigenvectors.clone();
    let pi = parity_operator(basis).matrix;
    let nop = number_operator(basis, params.n_g_p).matrix;
    let tol = 1e-9 * (params.e_j_p + params.e_c_p);
    let m = values.len();
    let mut start = 0;
    while start < m {
        let mut end = start + 1;
        while end < m && values[end] - values[end - 1] < tol {
            end += 1;
        }
        if end - start > 1 {
            resolve_cluster(&mut vecs, &mut values, start, end, &pi, &nop);
        }
        start = end;
    }
    let mut vecs = vecs.columns(0, k).into_owned();
    values.truncate(k);
    anchor_columns(&mut vecs);
    if k >= 3 {
        make_element_imaginary(&mut vecs, &nop, 2, 1, 2);
    }
    if k >= 4 {
        make_element_imaginary(&mut vecs, &nop, 3, 0, 3);
    }
    let parity = vecs
        .column_iter()
        .map(|col| classify_parity(col.as_slice(), basis))
        .collect();
    Ok(Spectrum {
        eigenvalues: values,
        eigenvectors: vecs,
        parity: Some(parity),
        gauge_fixed: true,
    })
}

fn resolve_cluster(
    vecs: &mut CMatrix,
    values: &mut [f64],
    start: usize,
    end: usize,
    pi: &CMatrix,
    nop: &CMatrix,
) {
    let block = vecs.columns(start, end - start).into_owned();
    let p = block.adjoint() * pi * &block;
    let (_, rot) = eigh(&p);
    let mut sub = &block * rot;
    let mut order: Vec<(f64, usize)> = (0..sub.ncols())
        .map(|j| {
            let col = sub.column(j);
            ((col.adjoint() * nop * col)[(0, 0)].re, j)
        })
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0));
    let sorted = CMatrix::from_columns(
        &order
            .iter()
            .map(|&(_, j)| sub.column(j).into_owned())
            .collect::<Vec<_>>(),
    );
    sub = sorted;
    let mean = values[start..end].iter().sum::<f64>() / (end - start) as f64;
    for (j, col) in (start..end).enumerate() {
        vecs.set_column(col, &sub.column(j));
        values[col] = mean;
    }
}

/// Matrix element `⟨a|op|b⟩` between spectrum columns.
pub fn element(s: &Spectrum, op: &CMatrix, a: usize, b: usize) -> Complex64 {
    (s.eigenvectors.column(a).adjoint() * op * s.eigenvectors.column(b))[(0, 0)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit_ops::{ppq_error_hamiltonians, transmon_hamiltonian, DEFAULT_CUTOFF};
    use crate::linalg::diag;
    use crate::units::{ghz, to_ghz};

    #[test]
    fn diagonal_example() {
        let h = Operator::new(diag(&[3.0, 1.0, 2.0]), BasisDescriptor::Generic(3)).unwrap();
        let s = eigendecompose(&h, 2).unwrap();
        assert_eq!(s.eigenvalues, vec![1.0, 2.0]);
        assert!(s.parity.is_none());
        assert!(eigendecompose(&h, 4).is_err());
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = diag(&[1.0, 2.0]);
        m[(0, 1)] = Complex64::new(1.0, 0.0);
        let op = Operator {
            matrix: m,
            basis: BasisDescriptor::Generic(2),
        };
        assert!(matches!(
            eigendecompose(&op, 1),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn transmon_frequency() {
        let p = CircuitParams::reference();
        let s30 = transmon_spectrum(&p, &ChargeBasis::transmon(30).unwrap(), 0.0, 8).unwrap();
        let s60 = transmon_spectrum(&p, &ChargeBasis::transmon(60).unwrap(), 0.0, 8).unwrap();
        let w = to_ghz(s30.transition(1));
        assert!((w - 4.18).abs() < 0.01, "{w}");
        assert!((w - 4.182).abs() / 4.182 < 0.01);
        for k in 0..8 {
            let rel = (s30.eigenvalues[k] - s60.eigenvalues[k]).abs() / s60.eigenvalues[k].abs();
            assert!(rel < 1e-10);
        }
    }

    #[test]
    fn transmon_diagonal_charge_vanishes() {
        let p = CircuitParams::reference();
        let b = ChargeBasis::transmon(DEFAULT_CUTOFF).unwrap();
        let s = transmon_spectrum(&p, &b, 0.0, 2).unwrap();
        let n = number_operator(&b, 0.0).matrix;
        assert!(element(&s, &n, 0, 0).norm() < 1e-12);
        assert!(element(&s, &n, 1, 1).norm() < 1e-12);
        let x = element(&s, &n, 0, 1);
        assert!(x.re.abs() < 1e-12 && x.im > 0.0);
    }

    #[test]
    fn ppq_labels_and_gauge() {
        let p = CircuitParams::reference();
        let b = ChargeBasis::ppq(DEFAULT_CUTOFF).unwrap();
        let s = ppq_spectrum(&p, &b, 4).unwrap();
        assert_eq!(
            s.parity.clone().unwrap(),
            vec![Parity::Even, Parity::Odd, Parity::Odd, Parity::Even]
        );
        let n = number_operator(&b, 0.0).matrix;
        let a = element(&s, &n, 2, 1);
        let d = element(&s, &n, 3, 0);
        assert!(a.re.abs() < 1e-12 && a.im > 0.0, "{a}");
        assert!(d.re.abs() < 1e-12 && d.im > 0.0, "{d}");
    }

    #[test]
    fn ppq_ordering_flips_above_half() {
        let b = ChargeBasis::ppq(DEFAULT_CUTOFF).unwrap();
        let p = CircuitParams::from_ghz(10.0, 0.25, 3.0, 0.25, 0.0);
        let below = ppq_spectrum(&p.with_n_g_p(0.2), &b, 2).unwrap();
        let above = ppq_spectrum(&p.with_n_g_p(0.8), &b, 2).unwrap();
        assert_eq!(below.parity.unwrap(), vec![Parity::Even, Parity::Odd]);
        assert_eq!(above.parity.unwrap(), vec![Parity::Odd, Parity::Even]);
    }

    #[test]
    fn sweet_spot_degeneracy_resolved_by_parity() {
        let b = ChargeBasis::ppq(DEFAULT_CUTOFF).unwrap();
        let p = CircuitParams::from_ghz(12.0, 0.2, 2.7, 0.18, 0.0).with_n_g_p(0.5);
        let s = ppq_spectrum(&p, &b, 4).unwrap();
        let raw = eigendecompose(&ppq_hamiltonian(&p, &b).unwrap(), 2).unwrap();
        assert!((raw.eigenvalues[1] - raw.eigenvalues[0]).abs() < 1e-9 * raw.eigenvalues[0].abs());
        assert_eq!(
            s.parity.unwrap(),
            vec![Parity::Even, Parity::Odd, Parity::Odd, Parity::Even]
        );
    }

    #[test]
    fn error_term_mixes_parity() {
        let b = ChargeBasis::ppq(DEFAULT_CUTOFF).unwrap();
        let p = CircuitParams::reference().with_errors(0.05 * ghz(2.7), 0.0);
        let (hx, _) = ppq_error_hamiltonians(&p, &b).unwrap();
        let h = ppq_hamiltonian(&p, &b).unwrap();
        let op = Operator::new(h.matrix + hx.matrix, h.basis).unwrap();
        let s = eigendecompose(&op, 2).unwrap();
        assert_eq!(s.parity.unwrap()[0], Parity::Mixed);
    }

    #[test]
    fn basis_state_parity() {
        let b = ChargeBasis::ppq(3).unwrap();
        let mut v = vec![Complex64::new(0.0, 0.0); b.dim()];
        v[3] = Complex64::new(1.0, 0.0);
        assert_eq!(classify_parity(&v, &b), Parity::Even);
        v[3] = Complex64::new(0.0, 0.0);
        v[4] = Complex64::new(0.0, 1.0);
        assert_eq!(classify_parity(&v, &b), Parity::Odd);
    }

    #[test]
    fn residual_check_runs() {
        let p = CircuitParams::reference();
        let h = transmon_hamiltonian(&p, &ChargeBasis::transmon(10).unwrap()).unwrap();
        assert!(eigendecompose(&h, 21).is_ok());
    }
}
