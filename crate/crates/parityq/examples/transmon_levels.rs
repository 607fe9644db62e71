//! Transmon levels from charge-basis diagonalization against the Duffing
//! estimate, and the flux dependence of the qubit transition.
//!
//! cargo run --example transmon_levels

use parityq::circuit_ops::DEFAULT_CUTOFF;
use parityq::spectra::{duffing_levels, transmon_flux_sweep, transmon_spectrum, Which};
use parityq::units::to_ghz;
use parityq::{ChargeBasis, CircuitParams, Result};

pub struct Summary {
    pub omega01: f64,
    pub duffing01: f64,
    /// ω₀₁ at Φ = 0.4 over ω₀₁ at Φ = 0.
    pub tuning_ratio: f64,
}

pub fn run() -> Result<Summary> {
    let p = CircuitParams::reference();
    let basis = ChargeBasis::transmon(DEFAULT_CUTOFF)?;
    let s = transmon_spectrum(&p, &basis, 0.0, 4)?;
    println!("level  exact (GHz)  Duffing (GHz)");
    for m in 0..4 {
        let d = duffing_levels(&p, Which::Transmon, m)?.energy;
        println!(
            "{m:>5}  {:>11.5}  {:>13.5}",
            to_ghz(s.eigenvalues[m]),
            to_ghz(d)
        );
    }
    let duffing01 = duffing_levels(&p, Which::Transmon, 1)?.energy
        - duffing_levels(&p, Which::Transmon, 0)?.energy;

    let flux: Vec<f64> = (0..=8).map(|k| 0.05 * k as f64).collect();
    let sweep = transmon_flux_sweep(&p, &basis, &flux, 3)?;
    println!("\nflux   w01 (GHz)  Im<0|n|1>");
    let n01 = &sweep.channels["n01_im"];
    for (i, f) in flux.iter().enumerate() {
        println!(
            "{f:>4.2}  {:>10.4}  {:>9.4}",
            to_ghz(sweep.spectra[i].transition(1)),
            n01[i]
        );
    }
    let first = sweep.spectra[0].transition(1);
    Ok(Summary {
        omega01: s.transition(1),
        duffing01,
        tuning_ratio: sweep.spectra[8].transition(1) / first,
    })
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run().map(|_| ())
}
