//! End-to-end physics checks on the gate layer.

use std::f64::consts::PI;

use parityq::gates::{
    cz_gate, cz_with_dwell, gate_fidelity, propagate_fn, wrap_phase, CzOptions, DwellMode,
    GateModel, Ramp,
};
use parityq::linalg::{diag, expm_i, max_abs};
use parityq::sw::{rotating_model, RotatingCouplings, RwaVariant};
use parityq::units::{ghz, mhz, ns};
use parityq::CircuitParams;

const PLATEAU: f64 = 0.176;

fn instant() -> CzOptions {
    CzOptions {
        ramp: Ramp::Instant,
        calibrate: false,
        ..CzOptions::default()
    }
}

#[test]
fn no_conditional_phase_without_coupling() {
    let p = CircuitParams::reference().with_coupling(0.0);
    let r = cz_with_dwell(
        &p,
        &CzOptions {
            calibrate: false,
            ..CzOptions::default()
        },
        PLATEAU,
        ns(50.0),
    )
    .unwrap();
    assert!(r.conditional_phase.unwrap().abs() < 1e-9);
    assert!(r.leakage < 1e-12);
}

#[test]
fn conditional_phase_is_additive_in_dwell() {
    let p = CircuitParams::reference();
    let opts = instant();
    let phase = |t: f64| {
        cz_with_dwell(&p, &opts, PLATEAU, ns(t))
            .unwrap()
            .conditional_phase
            .unwrap()
    };
    let base = phase(0.0);
    let one = wrap_phase(phase(10.0) - base);
    let two = wrap_phase(phase(20.0) - base);
    assert!((two / one - 2.0).abs() < 0.02, "{one} {two}");
}

#[test]
fn ramp_step_halving_converges() {
    let p = CircuitParams::reference();
    let run = |dt: f64| {
        let opts = CzOptions {
            dt: Some(ns(dt)),
            calibrate: false,
            ..CzOptions::default()
        };
        cz_with_dwell(&p, &opts, PLATEAU, ns(20.0))
            .unwrap()
            .unitary_p0
    };
    let coarse = run(0.002);
    let fine = run(0.001);
    let gap = max_abs(&(coarse - fine));
    assert!(gap < 1e-9, "{gap:e}");
}

#[test]
fn full_model_conserves_parity() {
    let p = CircuitParams::reference();
    let opts = CzOptions {
        model: GateModel::Full,
        ..instant()
    };
    let r = cz_with_dwell(&p, &opts, PLATEAU, ns(5.0)).unwrap();
    assert!(r.parity_violation < 1e-9);
    assert!(r.leakage < 0.05);
}

#[test]
fn four_level_model_agrees_with_six_level() {
    let p = CircuitParams::reference();
    let six = cz_with_dwell(&p, &instant(), PLATEAU, ns(30.0)).unwrap();
    let four = cz_with_dwell(
        &p,
        &CzOptions {
            model: GateModel::Four,
            ..instant()
        },
        PLATEAU,
        ns(30.0),
    )
    .unwrap();
    let d = wrap_phase(six.conditional_phase.unwrap() - four.conditional_phase.unwrap());
    assert!(d.abs() < 0.05, "{d}");
}

#[test]
fn resonant_dwell_mode_runs() {
    let p = CircuitParams::reference();
    let opts = CzOptions {
        dwell_mode: DwellMode::Resonant,
        ..CzOptions::default()
    };
    let r = cz_gate(&p, &opts).unwrap();
    assert!(r.parity_violation < 1e-9);
    let d = r.dwell.unwrap();
    assert!((d.flux - d.anticrossing_flux.unwrap()).abs() < 1e-12);
    assert!(r.duration < ns(20.0));
}

#[test]
fn gate_targets_other_phases() {
    let p = CircuitParams::reference();
    let r = cz_gate(
        &p,
        &CzOptions {
            phi: PI / 2.0,
            ..CzOptions::default()
        },
    )
    .unwrap();
    assert!(r.fidelity > 0.99);
    assert!(r.duration < cz_gate(&p, &CzOptions::default()).unwrap().duration);
}

/// Computational error of the rotating-frame propagator with sin-error
/// terms against its static part.
fn sin_error_infidelity(omega_t: f64) -> f64 {
    let g = RotatingCouplings {
        g_zz_minus: mhz(-8.0),
        g_xx: mhz(20.0),
        g_yy: mhz(10.0),
        ..Default::default()
    };
    let omega_p = ghz(0.5);
    let t = ns(20.0);
    let dt = 2.0 * PI / ((omega_t + omega_p) * 100.0);
    let u = propagate_fn(
        |s| rotating_model(&g, omega_t, omega_p, s, RwaVariant::SinError),
        t,
        dt,
    )
    .unwrap();
    let ideal = expm_i(&diag(&g.static_diagonal()), t);
    1.0 - gate_fidelity(&u, &ideal)
}

#[test]
fn sin_error_averages_out_with_transmon_frequency() {
    let errs: Vec<f64> = [3.0, 6.0, 12.0]
        .iter()
        .map(|&w| sin_error_infidelity(ghz(w)))
        .collect();
    assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
    assert!(errs[0] / errs[2] > 4.0, "{errs:?}");
}
