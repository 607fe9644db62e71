//! Sparse hermitian storage and a Lanczos eigensolver with full
//! reorthogonalization, for composite charge bases too large to store
//! densely.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::{anchor_columns, classify_by_mask, ppq_parity_mask, Spectrum};
use crate::circuit_ops::BasisDescriptor;
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector};

/// Row-compressed hermitian matrix.
#[derive(Clone, Debug)]
pub struct SparseOperator {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<Complex64>,
    pub basis: BasisDescriptor,
}

impl SparseOperator {
    /// Build from (row, col, value) triplets; duplicates are summed.
    pub fn from_triplets(
        dim: usize,
        mut triplets: Vec<(usize, usize, Complex64)>,
        basis: BasisDescriptor,
    ) -> Self {
        triplets.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; dim + 1];
        let mut cols = Vec::with_capacity(triplets.len());
        let mut vals: Vec<Complex64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            if last == Some((r, c)) {
                *vals.last_mut().expect("nonempty") += v;
                continue;
            }
            cols.push(c);
            vals.push(v);
            row_ptr[r + 1] += 1;
            last = Some((r, c));
        }
        for r in 0..dim {
            row_ptr[r + 1] += row_ptr[r];
        }
        Self {
            dim,
            row_ptr,
            cols,
            vals,
            basis,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn apply(&self, x: &CVector) -> CVector {
        let mut y = CVector::zeros(self.dim);
        for r in 0..self.dim {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.vals[k] * x[self.cols[k]];
            }
            y[r] = acc;
        }
        y
    }

    pub fn to_dense(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.dim, self.dim);
        for r in 0..self.dim {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                m[(r, self.cols[k])] += self.vals[k];
            }
        }
        m
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.vals.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..self.dim {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                let c = self.cols[k];
                worst = worst.max((self.vals[k] - self.get(c, r).conj()).norm());
            }
        }
        worst
    }

    fn get(&self, r: usize, c: usize) -> Complex64 {
        let row = &self.cols[self.row_ptr[r]..self.row_ptr[r + 1]];
        match row.binary_search(&c) {
            Ok(k) => self.vals[self.row_ptr[r] + k],
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct LanczosOptions {
    pub max_iterations: usize,
    /// Residual target relative to ‖H‖ (Frobenius).
    pub tolerance: f64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self {
            max_iterations: 600,
            tolerance: 1e-10,
        }
    }
}

/// Deterministic start vector with weight on every basis state.
fn start_vector(dim: usize) -> CVector {
    let v = CVector::from_iterator(
        dim,
        (0..dim).map(|i| {
            let x = i as f64;
            Complex64::new(1.0 + 0.5 * (0.7 * x).sin(), 0.3 * (1.3 * x).cos())
        }),
    );
    let n = v.norm();
    v / Complex64::new(n, 0.0)
}

/// `k` lowest eigenpairs. Exactly degenerate levels are found only once
/// (a Krylov space holds one vector per distinct eigenvalue), so callers
/// needing multiplicities should split by symmetry first.
pub fn lanczos(h: &SparseOperator, k: usize, opts: LanczosOptions) -> Result<Spectrum> {
    let n = h.dim();
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("k = {k} not in [1, {n}]")));
    }
    let defect = h.hermiticity_defect();
    let scale = h.norm().max(f64::MIN_POSITIVE);
    if defect > 1e-12 * scale {
        return Err(Error::NotHermitian { defect });
    }
    let m_max = opts.max_iterations.min(n);
    let mut basis: Vec<CVector> = vec![start_vector(n)];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut last_residual = f64::INFINITY;
    let check_every = 10;
    for j in 0..m_max {
        let mut w = h.apply(&basis[j]);
        let a = basis[j].dotc(&w).re;
        alpha.push(a);
        // full reorthogonalization, twice for stability
        for _ in 0..2 {
            for q in &basis {
                let proj = q.dotc(&w);
                w.axpy(-proj, q, Complex64::new(1.0, 0.0));
            }
        }
        let b = w.norm();
        let m = j + 1;
        let exhausted = b < 1e-14 * scale;
        if m >= k && (m % check_every == 0 || exhausted || m == m_max) {
            let (theta, s) = tridiagonal_eigen(&alpha, &beta);
            let res = (0..k)
                .map(|i| (b * s[(m - 1, i)]).abs())
                .fold(0.0, f64::max);
            last_residual = res / scale;
            if res < opts.tolerance * scale || exhausted || m == n {
                return Ok(ritz(&basis, &theta, &s, k, &h.basis));
            }
        }
        if exhausted {
            break;
        }
        beta.push(b);
        basis.push(w / Complex64::new(b, 0.0));
    }
    Err(Error::NoConvergence {
        iterations: alpha.len(),
        residual: last_residual,
    })
}

fn tridiagonal_eigen(alpha: &[f64], beta: &[f64]) -> (Vec<f64>, DMatrix<f64>) {
    let m = alpha.len();
    let mut t = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alpha[i];
        if i + 1 < m {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let eig = SymmetricEigen::new(t);
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let theta = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut s = DMatrix::<f64>::zeros(m, m);
    for (c, &i) in order.iter().enumerate() {
        s.set_column(c, &eig.eigenvectors.column(i));
    }
    (theta, s)
}

fn ritz(
    basis: &[CVector],
    theta: &[f64],
    s: &DMatrix<f64>,
    k: usize,
    descriptor: &BasisDescriptor,
) -> Spectrum {
    let n = basis[0].len();
    let m = theta.len();
    let mut vecs = CMatrix::zeros(n, k);
    for i in 0..k {
        let mut v = DVector::<Complex64>::zeros(n);
        for j in 0..m {
            v.axpy(
                Complex64::new(s[(j, i)], 0.0),
                &basis[j],
                Complex64::new(1.0, 0.0),
            );
        }
        let norm = v.norm();
        vecs.set_column(i, &(v / Complex64::new(norm, 0.0)));
    }
    anchor_columns(&mut vecs);
    let parity = ppq_parity_mask(descriptor).map(|mask| {
        vecs.column_iter()
            .map(|col| classify_by_mask(col.as_slice(), &mask))
            .collect()
    });
    Spectrum {
        eigenvalues: theta[..k].to_vec(),
        eigenvectors: vecs,
        parity,
        gauge_fixed: false,
    }
}
