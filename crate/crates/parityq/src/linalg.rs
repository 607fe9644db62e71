//! Dense complex linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Largest element of |M - M†|.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut d: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            d = d.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    d
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Hermitian eigendecomposition with eigenvalues sorted ascending.
///
/// Entries below 1e-15·max|M| are set to zero first. nalgebra's QR
/// iteration occasionally returns eigenvectors with O(1) residuals on
/// nearly diagonal input (e.g. a transmon block a few 1e-8 flux quanta
/// off its reference point); such results are recomputed with cyclic
/// Jacobi.
pub fn eigh(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    let scale = max_abs(m);
    let floor = 1e-15 * scale;
    let chopped = m.map(|z| {
        if z.norm() < floor {
            Complex64::new(0.0, 0.0)
        } else {
            z
        }
    });
    let eig = SymmetricEigen::new(chopped.clone());
    let values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    let (values, vectors) =
        if residual(&chopped, &values, &eig.eigenvectors) <= EIGH_RESIDUAL_TOL * scale {
            (values, eig.eigenvectors)
        } else {
            jacobi(&chopped)
        };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut sorted = CMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        sorted.set_column(col, &vectors.column(k));
    }
    (order.iter().map(|&k| values[k]).collect(), sorted)
}

/// Accepted max|HV − VΛ| relative to max|H|.
const EIGH_RESIDUAL_TOL: f64 = 1e-12;

fn residual(m: &CMatrix, values: &[f64], vectors: &CMatrix) -> f64 {
    let mut r = m * vectors;
    for (k, &lam) in values.iter().enumerate() {
        let mut col = r.column_mut(k);
        col -= vectors.column(k) * c(lam);
    }
    max_abs(&r)
}

/// Cyclic Jacobi for hermitian matrices.
fn jacobi(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    let mut a = m.clone();
    let mut v = CMatrix::identity(n, n);
    let total: f64 = a.iter().map(|z| z.norm_sqr()).sum();
    for _ in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off <= 1e-32 * total {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let ph = apq / r;
                let tau = (a[(q, q)].re - a[(p, p)].re) / (2.0 * r);
                let t =
                    if tau >= 0.0 { 1.0 } else { -1.0 } / (tau.abs() + (1.0 + tau * tau).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * cs;
                // J = [[cs, sn], [−sn·conj(ph), cs·conj(ph)]] on (p, q)
                let (j00, j01, j10, j11) = (c(cs), c(sn), -ph.conj() * sn, ph.conj() * cs);
                for k in 0..n {
                    let (x, y) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = x * j00 + y * j10;
                    a[(k, q)] = x * j01 + y * j11;
                    let (x, y) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = x * j00 + y * j10;
                    v[(k, q)] = x * j01 + y * j11;
                }
                for k in 0..n {
                    let (x, y) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = j00.conj() * x + j10.conj() * y;
                    a[(q, k)] = j01.conj() * x + j11.conj() * y;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
            }
        }
    }
    ((0..n).map(|i| a[(i, i)].re).collect(), v)
}

/// exp(-i H t) by Padé scaling and squaring.
pub fn expm_i(h: &CMatrix, t: f64) -> CMatrix {
    (h * Complex64::new(0.0, -t)).exp()
}

/// ‖U†U − I‖ as a max-element norm.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    let n = u.ncols();
    max_abs(&(u.adjoint() * u - CMatrix::identity(n, n)))
}

pub fn diag(values: &[f64]) -> CMatrix {
    CMatrix::from_diagonal(&CVector::from_iterator(
        values.len(),
        values.iter().map(|&v| c(v)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigh_sorts() {
        let m = diag(&[3.0, 1.0, 2.0]);
        let (e, v) = eigh(&m);
        assert_eq!(e, vec![1.0, 2.0, 3.0]);
        assert!((v[(1, 0)].norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigh_survives_tiny_couplings() {
        let n = 21;
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            let q = i as f64 - 10.0;
            m[(i, i)] = c(q * q);
            if i + 1 < n {
                m[(i, i + 1)] = c(1e-15);
                m[(i + 1, i)] = c(1e-15);
            }
        }
        let (e, v) = eigh(&m);
        for (j, &ej) in e.iter().enumerate() {
            let col = v.column(j);
            assert!((&m * col - col * c(ej)).norm() < 1e-10);
        }
    }

    #[test]
    fn jacobi_diagonalizes_dense_hermitian() {
        let n = 7;
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c((i * i) as f64 * 0.3 - 1.0);
            for j in i + 1..n {
                let z = Complex64::new(((i + 2 * j) as f64).sin(), ((3 * i + j) as f64).cos());
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        let (e, v) = jacobi(&m);
        assert!(residual(&m, &e, &v) < 1e-12);
        assert!(unitarity_defect(&v) < 1e-12);
        let (e_ref, _) = eigh(&m);
        let mut e = e;
        e.sort_by(f64::total_cmp);
        for (a, b) in e.iter().zip(&e_ref) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn eigh_nearly_diagonal_with_small_mixing() {
        // Off-diagonals a few 1e-8 of the diagonal, where the QR path has
        // been seen to fail.
        let n = 6;
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c(2.6e10 * i as f64 - 1e9 * (i * i) as f64);
        }
        for k in 0..40 {
            let eps = 10f64.powf(-9.0 + 0.2 * k as f64) * 7.5e10;
            let mut h = m.clone();
            for i in 0..n {
                h[(i, i)] -= c(eps * 0.5);
                if i + 1 < n {
                    let z = c(eps * 0.3 * (i + 1) as f64);
                    h[(i, i + 1)] -= z;
                    h[(i + 1, i)] -= z;
                }
            }
            let (e, v) = eigh(&h);
            assert!(residual(&h, &e, &v) < 1e-10 * max_abs(&h), "eps {eps:e}");
        }
    }

    #[test]
    fn expm_diagonal_phases() {
        let h = diag(&[0.3, -1.2]);
        let u = expm_i(&h, 2.0);
        assert!((u[(0, 0)] - Complex64::from_polar(1.0, -0.6)).norm() < 1e-12);
        assert!((u[(1, 1)] - Complex64::from_polar(1.0, 2.4)).norm() < 1e-12);
    }
}
