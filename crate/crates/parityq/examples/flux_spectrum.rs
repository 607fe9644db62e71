//! Coupled spectrum over the transmon flux and the two anti-crossings that
//! drive the CZ gate.
//!
//! cargo run --example flux_spectrum

use parityq::coupled::{locate_anticrossing, Anticrossing, ProductModel};
use parityq::spectra::eigendecompose;
use parityq::units::to_ghz;
use parityq::{CircuitParams, Result};

pub struct Summary {
    pub eleven02: f64,
    pub ten03: f64,
    /// Minimal 10 ↔ 03 gap, rad/s.
    pub gap: f64,
}

pub fn run() -> Result<Summary> {
    let p = CircuitParams::reference();
    println!("flux   lowest coupled levels (GHz above ground)");
    for k in 0..=10 {
        let flux = 0.05 * k as f64;
        let model = ProductModel::at(&p.with_flux(flux))?;
        let s = eigendecompose(&model.hamiltonian(), 6)?;
        let row: Vec<String> = (1..6)
            .map(|i| format!("{:>8.4}", to_ghz(s.transition(i))))
            .collect();
        println!("{flux:>4.2}  {}", row.join(" "));
    }
    let a = locate_anticrossing(&p, Anticrossing::Eleven02)?;
    let b = locate_anticrossing(&p, Anticrossing::Ten03)?;
    for r in [&a, &b] {
        println!(
            "{}: flux {:.5} (uncoupled {:.5}), gap {:.2} MHz",
            r.which,
            r.flux,
            r.uncoupled_flux,
            to_ghz(r.gap) * 1e3
        );
    }
    Ok(Summary {
        eleven02: a.flux,
        ten03: b.flux,
        gap: b.gap,
    })
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run().map(|_| ())
}
