//! Two-qubit effective Hamiltonian: numerical direct rotation against the
//! second-order analytic couplings, across the PPQ offset charge.
//!
//! cargo run --example effective_couplings

use parityq::coupled::{
    coupling_matrix_elements, IslandStates, LowEnergyLabels, ProductModel, COMPUTATIONAL,
};
use parityq::sw::{analytic_coefficients, pauli_coefficients, product_sw};
use parityq::{CircuitParams, Result};

fn mhz(x: f64) -> f64 {
    parityq::units::to_ghz(x) * 1e3
}

pub struct Row {
    pub n_g_p: f64,
    pub numeric_zz: f64,
    pub analytic_zz: f64,
    pub numeric_yz: f64,
    pub analytic_yz: f64,
}

pub fn run() -> Result<Vec<Row>> {
    let base = CircuitParams::reference();
    println!("n_g,p   g_zz- num/ana (MHz)     g_yz num/ana (MHz)    g_y num/ana (kHz)");
    let mut rows = Vec::new();
    for ng in [0.0, 0.1, 0.25, 0.4, 0.5] {
        let p = base.with_n_g_p(ng);
        let model = ProductModel::at(&p)?;
        let pc = pauli_coefficients(&product_sw(&model, &COMPUTATIONAL)?.effective.matrix)?;
        let e = coupling_matrix_elements(&p, p.flux)?;
        let f = LowEnergyLabels::from_states(&IslandStates::new(&p, p.flux, 2, 4)?);
        let a = analytic_coefficients(&e, &f)?;
        println!(
            "{ng:>5.2}  {:>9.4} {:>9.4}   {:>9.4} {:>9.4}   {:>9.2} {:>9.2}",
            mhz(pc.g_zz_minus()),
            mhz(a.g_zz_minus),
            mhz(pc.g_yz()),
            mhz(a.g_yz),
            mhz(pc.g_y()) * 1e3,
            mhz(a.g_y) * 1e3
        );
        rows.push(Row {
            n_g_p: ng,
            numeric_zz: pc.g_zz_minus(),
            analytic_zz: a.g_zz_minus,
            numeric_yz: pc.g_yz(),
            analytic_yz: a.g_yz,
        });
    }
    Ok(rows)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run().map(|_| ())
}
