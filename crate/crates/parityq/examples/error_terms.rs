//! Residual Josephson terms of the PPQ, ε^x cos φ and ε^y sin φ, at
//! n_g,p = 0. The sin term couples the qubit block to |0_t2_p⟩, |0_t3_p⟩
//! through κ and produces σ^xσ^x / σ^yσ^y couplings; the cos term stays
//! inside each block.
//!
//! cargo run --release --example error_terms

use num_complex::Complex64;
use parityq::coupled::{
    low_energy_hamiltonian, CouplingElements, IslandStates, LowEnergyLabels, ProductModel,
    COMPUTATIONAL, SIX_LEVEL,
};
use parityq::linalg::CMatrix;
use parityq::sw::{
    direct_rotation, error_coupling_coefficients, error_coupling_coefficients_full,
    pauli_coefficients, product_sw, PauliCoefficients, Selection,
};
use parityq::{CircuitParams, Result};

fn mhz(x: f64) -> f64 {
    parityq::units::to_ghz(x) * 1e3
}

fn print_magnitudes(m: &CMatrix) {
    println!(
        "  {}",
        SIX_LEVEL.map(|l| format!("{:>7}", l.to_string())).join(" ")
    );
    for i in 0..6 {
        let row: Vec<String> = (0..6)
            .map(|j| {
                if i == j {
                    "      -".into()
                } else {
                    format!("{:>7.2}", mhz(m[(i, j)].norm()))
                }
            })
            .collect();
        println!("  {}", row.join(" "));
    }
}

/// Largest |H_ij| between the qubit block and 02/03, excluding the λ′, λ″
/// coupling entries (11↔02, 10↔03).
pub fn block_leak(m: &CMatrix) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..4 {
        for j in 4..6 {
            if (i, j) != (0, 4) && (i, j) != (1, 5) {
                worst = worst.max(m[(i, j)].norm());
            }
        }
    }
    worst
}

fn six_level_sw(m: &CMatrix) -> Result<PauliCoefficients> {
    let mut v0 = CMatrix::zeros(6, 4);
    for j in 0..4 {
        v0[(j, j)] = Complex64::new(1.0, 0.0);
    }
    let n = direct_rotation(&v0, m, Selection::MaxOverlap, COMPUTATIONAL.to_vec())?;
    pauli_coefficients(&n.effective.matrix)
}

pub struct Summary {
    /// σ^xσ^x coupling: product model, six-level numeric, second order.
    pub g_xx: [f64; 3],
    pub sin_leak: f64,
    pub cos_leak: f64,
}

pub fn run() -> Result<Summary> {
    let base = CircuitParams::reference();
    let eps = 0.05 * base.e_j_p;

    let p = base.with_errors(0.0, eps);
    let m = low_energy_hamiltonian(&p, p.flux)?;
    println!("sin error, eps_y = 0.05 E_J,p: |H_ij| of the six-level projection (MHz)");
    print_magnitudes(&m.matrix);

    let product = pauli_coefficients(
        &product_sw(&ProductModel::at(&p)?, &COMPUTATIONAL)?
            .effective
            .matrix,
    )?;
    let six = six_level_sw(&m.matrix)?;
    let states = IslandStates::new(&p, p.flux, 2, 4)?;
    let e = CouplingElements::from_states(&states);
    let f = LowEnergyLabels::from_states(&states);
    let full = error_coupling_coefficients_full(&e, &f)?;
    let closed = error_coupling_coefficients(&e, &f)?;
    println!("\n(MHz)   product model   six-level   2nd order   near-resonant only");
    for (name, a, b, c, d) in [
        ("g_xx", product.g_xx(), six.g_xx(), full.g_xx, closed.g_xx),
        ("g_yy", product.g_yy(), six.g_yy(), full.g_yy, closed.g_yy),
    ] {
        println!(
            "{name}   {:>13.4}   {:>9.4}   {:>9.4}   {:>18.4}",
            mhz(a),
            mhz(b),
            mhz(c),
            mhz(d)
        );
    }

    let q = base.with_errors(eps, 0.0);
    let mx = low_energy_hamiltonian(&q, q.flux)?;
    println!("\ncos error, eps_x = 0.05 E_J,p (MHz)");
    print_magnitudes(&mx.matrix);
    let cos_leak = block_leak(&mx.matrix);
    let off = low_energy_hamiltonian(&q.with_n_g_p(0.1), q.flux)?;
    println!(
        "qubit block <-> 02/03 besides the coupling: {:.1e} MHz at n_g,p = 0, {:.2} MHz at n_g,p = 0.1",
        mhz(cos_leak),
        mhz(block_leak(&off.matrix))
    );
    Ok(Summary {
        g_xx: [product.g_xx(), six.g_xx(), full.g_xx],
        sin_leak: block_leak(&m.matrix),
        cos_leak,
    })
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run().map(|_| ())
}
