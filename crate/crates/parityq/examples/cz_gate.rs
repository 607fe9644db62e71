//! Flux-pulsed CZ between the transmon and the PPQ in the six-level model:
//! ramp to a plateau near the 10 ↔ 03 anti-crossing, dwell for a π
//! conditional phase, ramp back, then correct single-qubit phases.
//!
//! cargo run --release --example cz_gate

use parityq::gates::{cz_gate, CzOptions};
use parityq::units::{to_ghz, to_ns};
use parityq::{CircuitParams, Result};

pub fn run() -> Result<parityq::gates::GateReport> {
    let p = CircuitParams::reference();
    let r = cz_gate(&p, &CzOptions::default())?;
    if let Some(d) = r.dwell {
        println!(
            "plateau flux {:.4}, dwell {:.2} ns, ZZ rate {:.3} MHz",
            d.flux,
            to_ns(d.time),
            to_ghz(d.zz_rate) * 1e3
        );
    }
    println!("duration          {:.2} ns", to_ns(r.duration));
    println!(
        "conditional phase {:.6} rad",
        r.conditional_phase.unwrap_or(f64::NAN)
    );
    println!("fidelity          {:.6}", r.fidelity);
    println!("leakage           {:.2e}", r.leakage);
    println!("parity violation  {:.2e}", r.parity_violation);
    Ok(r)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run().map(|_| ())
}
