//! Two-qubit Pauli decomposition, transmon factor on the left.

use std::fmt;

use num_complex::Complex64;
use serde::ser::{Serialize, SerializeMap, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{c, kron, CMatrix, I};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

pub const PAULIS: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

impl Pauli {
    /// 2×2 matrix in the `[|1⟩, |0⟩]` ordering, so `Z = diag(1, −1)` and
    /// `⟨1|Y|0⟩ = −i`.
    pub fn matrix(&self) -> CMatrix {
        let z = c(0.0);
        let o = c(1.0);
        match self {
            Pauli::I => CMatrix::from_row_slice(2, 2, &[o, z, z, o]),
            Pauli::X => CMatrix::from_row_slice(2, 2, &[z, o, o, z]),
            Pauli::Y => CMatrix::from_row_slice(2, 2, &[z, -I, I, z]),
            Pauli::Z => CMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
        }
    }

    pub fn symbol(&self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    fn index(&self) -> usize {
        match self {
            Pauli::I => 0,
            Pauli::X => 1,
            Pauli::Y => 2,
            Pauli::Z => 3,
        }
    }
}

/// `P_t ⊗ P_p`.
pub fn pauli_string(t: Pauli, p: Pauli) -> CMatrix {
    kron(&t.matrix(), &p.matrix())
}

/// Real coefficients `c_P = Tr(P† H)/4` of a 4×4 hermitian matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PauliCoefficients {
    coeffs: [[f64; 4]; 4],
}

impl PauliCoefficients {
    pub fn get(&self, t: Pauli, p: Pauli) -> f64 {
        self.coeffs[t.index()][p.index()]
    }

    pub fn by_name(&self, name: &str) -> Option<f64> {
        let mut ch = name.chars();
        let parse = |x: Option<char>| PAULIS.into_iter().find(|p| Some(p.symbol()) == x);
        let t = parse(ch.next())?;
        let p = parse(ch.next())?;
        if ch.next().is_some() {
            return None;
        }
        Some(self.get(t, p))
    }

    /// Dressed transmon frequency `2 c_ZI`.
    pub fn omega_t(&self) -> f64 {
        2.0 * self.get(Pauli::Z, Pauli::I)
    }

    /// Dressed PPQ frequency `2 c_IZ`.
    pub fn omega_p(&self) -> f64 {
        2.0 * self.get(Pauli::I, Pauli::Z)
    }

    /// `g^zz_− = 4 c_ZZ`.
    pub fn g_zz_minus(&self) -> f64 {
        4.0 * self.get(Pauli::Z, Pauli::Z)
    }

    pub fn g_yz(&self) -> f64 {
        self.get(Pauli::Y, Pauli::Z)
    }

    pub fn g_y(&self) -> f64 {
        self.get(Pauli::Y, Pauli::I)
    }

    pub fn g_xx(&self) -> f64 {
        self.get(Pauli::X, Pauli::X)
    }

    pub fn g_yy(&self) -> f64 {
        self.get(Pauli::Y, Pauli::Y)
    }

    pub fn reconstruct(&self) -> CMatrix {
        let mut m = CMatrix::zeros(4, 4);
        for t in PAULIS {
            for p in PAULIS {
                m += pauli_string(t, p) * c(self.get(t, p));
            }
        }
        m
    }

    /// `(name, value)` pairs in a fixed order: II, IX, …, ZZ.
    pub fn iter(&self) -> impl Iterator<Item = (String, f64)> + '_ {
        PAULIS.into_iter().flat_map(move |t| {
            PAULIS
                .into_iter()
                .map(move |p| (format!("{}{}", t.symbol(), p.symbol()), self.get(t, p)))
        })
    }
}

impl fmt::Display for PauliCoefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, v) in self.iter() {
            if v != 0.0 {
                writeln!(f, "{name}: {v:+.6e}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for PauliCoefficients {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(16))?;
        for (k, v) in self.iter() {
            map.serialize_entry(&k, &v)?;
        }
        map.end()
    }
}

pub fn pauli_coefficients(h: &CMatrix) -> Result<PauliCoefficients> {
    if h.nrows() != 4 || h.ncols() != 4 {
        return Err(Error::InvalidArgument(format!(
            "Pauli decomposition needs a 4x4 matrix, got {}x{}",
            h.nrows(),
            h.ncols()
        )));
    }
    let mut coeffs = [[0.0; 4]; 4];
    for t in PAULIS {
        for p in PAULIS {
            let tr: Complex64 = (pauli_string(t, p).adjoint() * h).trace();
            coeffs[t.index()][p.index()] = tr.re / 4.0;
        }
    }
    Ok(PauliCoefficients { coeffs })
}
