//! SWAP from three CNOTs, with the PPQ rotations simulated in a two-level
//! model, used to move a state from the transmon into the PPQ.
//!
//! cargo run --release --example swap_transfer

use num_complex::Complex64;
use parityq::gates::{compose_gate, transfer_fidelity, ComposeOptions, CompositeKind};
use parityq::units::to_ns;
use parityq::{CircuitParams, Result};

pub struct Summary {
    pub fidelity: f64,
    pub transfer: f64,
}

pub fn run() -> Result<Summary> {
    let p = CircuitParams::reference();
    let r = compose_gate(CompositeKind::Swap, &p, &ComposeOptions::default())?;
    let (alpha, beta) = (Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8));
    let transfer = transfer_fidelity(&r.corrected(), alpha, beta);
    println!(
        "SWAP duration {:.1} ns, gate fidelity {:.5}",
        to_ns(r.duration),
        r.fidelity
    );
    println!("transfer fidelity for 0.6|0> + 0.8i|1>: {transfer:.5}");
    for n in &r.notes {
        println!("note: {n}");
    }
    Ok(Summary {
        fidelity: r.fidelity,
        transfer,
    })
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run().map(|_| ())
}
