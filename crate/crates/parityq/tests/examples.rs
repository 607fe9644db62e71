//! Every example runs and produces sensible numbers.

#[path = "../examples/cz_gate.rs"]
mod cz_gate;
#[path = "../examples/effective_couplings.rs"]
mod effective_couplings;
#[path = "../examples/error_terms.rs"]
mod error_terms;
#[path = "../examples/flux_spectrum.rs"]
mod flux_spectrum;
#[path = "../examples/ppq_parity.rs"]
mod ppq_parity;
#[path = "../examples/run_job.rs"]
mod run_job;
#[path = "../examples/rwa_correction.rs"]
mod rwa_correction;
#[path = "../examples/swap_transfer.rs"]
mod swap_transfer;
#[path = "../examples/transmon_levels.rs"]
mod transmon_levels;

#[test]
fn transmon_levels_runs() {
    let s = transmon_levels::run().unwrap();
    assert!((s.duffing01 / s.omega01 - 1.0).abs() < 0.01);
    assert!(s.tuning_ratio < 0.6);
}

#[test]
fn ppq_parity_runs() {
    let s = ppq_parity::run().unwrap();
    assert!(s.splitting_half < 1e-9 * s.splitting_zero);
    assert!(s.design_satisfied);
}

#[test]
fn flux_spectrum_runs() {
    let s = flux_spectrum::run().unwrap();
    assert!(0.0 < s.ten03 && s.ten03 < s.eleven02 && s.eleven02 < 0.5);
    assert!(s.gap > 0.0);
}

#[test]
fn effective_couplings_runs() {
    let rows = effective_couplings::run().unwrap();
    let zero = &rows[0];
    assert!(zero.numeric_yz.abs() < 1e-6 * zero.numeric_zz.abs());
    assert!(zero.numeric_zz < 0.0 && zero.analytic_zz < 0.0);
    let half = rows.last().unwrap();
    assert!(half.numeric_zz.abs() < 1e-6 * half.numeric_yz.abs());
    for r in &rows[1..] {
        assert!(
            (r.numeric_yz / r.analytic_yz - 1.0).abs() < 0.1,
            "n_g,p {}",
            r.n_g_p
        );
    }
}

#[test]
fn rwa_correction_runs() {
    let s = rwa_correction::run().unwrap();
    assert!((2.5..3.5).contains(&s.uncorrected_ratio));
    assert!((6.0..12.0).contains(&s.corrected_ratio));
}

#[test]
fn cz_gate_runs() {
    let r = cz_gate::run().unwrap();
    assert!(r.fidelity > 0.99);
    assert!(r.parity_violation < 1e-9);
}

#[test]
fn swap_transfer_runs() {
    let s = swap_transfer::run().unwrap();
    assert!(s.transfer > 0.97 && s.fidelity > 0.97);
}

#[test]
fn error_terms_runs() {
    let s = error_terms::run().unwrap();
    let [_, six, second] = s.g_xx;
    assert!((six / second - 1.0).abs() < 0.1);
    assert!(s.cos_leak < 1e-9 * s.sin_leak);
}

#[test]
fn run_job_runs() {
    let text = run_job::run().unwrap();
    let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data.len(), 7);
    assert!(data[0].starts_with("n_g_p,num_II"));
}
