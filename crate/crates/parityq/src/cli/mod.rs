//! Job runners behind the `parityq` binary: a TOML configuration in, a CSV
//! or JSON file out.

pub mod config;
pub mod output;

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

pub use config::{
    CircuitSection, GateKind, GateSection, JobConfig, JobKind, SpectrumModel, SpectrumSection,
    SwSection, SweepAxisKind, SweepSection,
};
pub use output::{Table, SCHEMA_VERSION, UNITS};

use crate::circuit_ops::{BasisDescriptor, ChargeBasis, CircuitParams, Operator, DEFAULT_CUTOFF};
use crate::coupled::{
    low_energy_hamiltonian, CouplingElements, IslandStates, LowEnergyLabels, ProductModel,
    COMPUTATIONAL,
};
use crate::error::{Error, Result};
use crate::gates::{
    compose_gate, cz_gate, rwa_check, serialize_matrix, single_qubit_gate, Axis, ComposeOptions,
    CompositeKind, CzOptions, GateReport, Ramp, RwaCheck, SingleQubitOptions, STEPS_PER_PERIOD,
};
use crate::linalg::CMatrix;
use crate::spectra::{
    classify_by_mask, eigendecompose, ppq_spectrum, transmon_spectrum, Parity, Spectrum,
};
use crate::sw::{analytic_coefficients, pauli_coefficients, product_sw, RotatingCouplings};
use crate::units::{ghz, ns, to_ghz, to_ns};
use output::{num, write_json};

/// Runs one job and writes its output to `out`.
pub fn run(kind: JobKind, config: &JobConfig, out: &Path) -> Result<()> {
    config.check_for(kind)?;
    match kind {
        JobKind::Spectrum => run_spectrum(config, out),
        JobKind::Sw => run_sw(config, out),
        JobKind::Gate => run_gate(config, out),
    }
}

fn sweep_points(config: &JobConfig) -> Result<(SweepSection, Vec<f64>)> {
    let s = config.sweep.ok_or_else(|| Error::Config {
        line: 0,
        message: "missing section [sweep]".into(),
    })?;
    let grid = s.grid()?;
    Ok((s, grid))
}

/// Evaluates `f` on every grid point in parallel, keeping grid order and
/// tagging failures with their location.
fn map_grid<T, F>(axis: SweepAxisKind, base: &CircuitParams, grid: &[f64], f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&CircuitParams) -> Result<T> + Sync,
{
    grid.par_iter()
        .map(|&v| {
            f(&axis.apply(base, v)).map_err(|e| Error::AtPoint {
                axis: axis.name().to_string(),
                value: v,
                source: Box::new(e),
            })
        })
        .collect()
}

struct SpectrumPoint {
    energies: Vec<f64>,
    parity: Option<Vec<Parity>>,
    spectrum: Option<Spectrum>,
}

fn spectrum_point(p: &CircuitParams, sec: &SpectrumSection) -> Result<SpectrumPoint> {
    let k = sec.levels;
    match sec.model {
        SpectrumModel::Transmon => {
            let basis = ChargeBasis::transmon(DEFAULT_CUTOFF)?;
            let s = transmon_spectrum(p, &basis, p.flux, k)?;
            Ok(SpectrumPoint {
                energies: s.eigenvalues.clone(),
                parity: None,
                spectrum: Some(s),
            })
        }
        SpectrumModel::Ppq => {
            let basis = ChargeBasis::ppq(DEFAULT_CUTOFF)?;
            let s = ppq_spectrum(p, &basis, k)?;
            Ok(SpectrumPoint {
                energies: s.eigenvalues.clone(),
                parity: s.parity.clone(),
                spectrum: Some(s),
            })
        }
        SpectrumModel::Coupled => {
            let model = ProductModel::at(p)?;
            if k > model.dim() {
                return Err(Error::InvalidArgument(format!(
                    "{k} levels requested, model has {}",
                    model.dim()
                )));
            }
            let s = eigendecompose(&model.hamiltonian(), k)?;
            let even: Vec<bool> = model.parity().iter().map(|&q| q == Parity::Even).collect();
            let parity = (0..s.len())
                .map(|i| {
                    let v: Vec<_> = s.eigenvectors.column(i).iter().copied().collect();
                    classify_by_mask(&v, &even)
                })
                .collect();
            Ok(SpectrumPoint {
                energies: s.eigenvalues,
                parity: Some(parity),
                spectrum: None,
            })
        }
        SpectrumModel::Six => {
            if k > 6 {
                return Err(Error::InvalidArgument(
                    "the six-level model has 6 levels".into(),
                ));
            }
            let m = low_energy_hamiltonian(p, p.flux)?;
            let s = eigendecompose(&Operator::new(m.matrix, BasisDescriptor::Generic(6))?, k)?;
            let even: Vec<bool> = m.parity.iter().map(|&q| q == Parity::Even).collect();
            let parity = (0..s.len())
                .map(|i| {
                    let v: Vec<_> = s.eigenvectors.column(i).iter().copied().collect();
                    classify_by_mask(&v, &even)
                })
                .collect();
            Ok(SpectrumPoint {
                energies: s.eigenvalues,
                parity: Some(parity),
                spectrum: None,
            })
        }
    }
}

#[derive(Serialize)]
struct Wavefunctions {
    axis: &'static str,
    values: Vec<f64>,
    /// Charge of every basis state.
    charges: Vec<i64>,
    /// `[point][level][charge]` amplitudes.
    re: Vec<Vec<Vec<f64>>>,
    im: Vec<Vec<Vec<f64>>>,
}

/// Sidecar path for wavefunctions: `<out>.psi.json`.
pub fn wavefunction_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".psi.json");
    PathBuf::from(s)
}

pub fn run_spectrum(config: &JobConfig, out: &Path) -> Result<()> {
    let sec = config.spectrum.unwrap_or_default();
    if sec.levels == 0 {
        return Err(Error::Config {
            line: 0,
            message: "spectrum.levels must be positive".into(),
        });
    }
    if sec.wavefunctions && !matches!(sec.model, SpectrumModel::Transmon | SpectrumModel::Ppq) {
        return Err(Error::Config {
            line: 0,
            message: "wavefunctions are available for the transmon and ppq models only".into(),
        });
    }
    let (sweep, grid) = sweep_points(config)?;
    let base = config.circuit.params()?;
    let points = map_grid(sweep.axis, &base, &grid, |p| spectrum_point(p, &sec))?;

    let k = points.iter().map(|p| p.energies.len()).min().unwrap_or(0);
    let with_parity = points.iter().all(|p| p.parity.is_some());
    let mut cols = vec![sweep.axis.name().to_string()];
    cols.extend((0..k).map(|i| format!("E{i}")));
    if with_parity {
        cols.extend((0..k).map(|i| format!("parity{i}")));
    }
    let mut table = Table::new(cols);
    table.comment(format!("job: spectrum, model: {:?}", sec.model).to_lowercase());
    table.comment(format!("axis: {}", sweep.axis.name()));
    for (v, pt) in grid.iter().zip(&points) {
        let mut row = vec![num(*v)];
        row.extend(pt.energies[..k].iter().map(|&e| num(to_ghz(e))));
        if let Some(par) = pt.parity.as_ref().filter(|_| with_parity) {
            row.extend(par[..k].iter().map(|q| q.as_str().to_string()));
        }
        table.rows.push(row);
    }
    table.write(out)?;

    if sec.wavefunctions {
        let basis = match sec.model {
            SpectrumModel::Transmon => ChargeBasis::transmon(DEFAULT_CUTOFF)?,
            _ => ChargeBasis::ppq(DEFAULT_CUTOFF)?,
        };
        let charges = (0..basis.dim()).map(|i| basis.charge(i)).collect();
        let split = |f: fn(&num_complex::Complex64) -> f64| -> Vec<Vec<Vec<f64>>> {
            points
                .iter()
                .map(|pt| {
                    let s = pt.spectrum.as_ref().expect("single-island spectrum");
                    (0..k)
                        .map(|i| s.eigenvectors.column(i).iter().map(f).collect())
                        .collect()
                })
                .collect()
        };
        let wf = Wavefunctions {
            axis: sweep.axis.name(),
            values: grid.clone(),
            charges,
            re: split(|z| z.re),
            im: split(|z| z.im),
        };
        write_json(&wavefunction_path(out), config, &wf)?;
    }
    Ok(())
}

struct SwPoint {
    pauli: Vec<(String, f64)>,
    min_singular: f64,
    analytic: Option<crate::sw::AnalyticCoefficients>,
}

fn sw_point(p: &CircuitParams, sec: &SwSection) -> Result<SwPoint> {
    let model = ProductModel::new(p, p.flux, sec.levels_t, sec.levels_p)?;
    let num_sw = product_sw(&model, &COMPUTATIONAL)?;
    let pc = pauli_coefficients(&num_sw.effective.matrix)?;
    let states = IslandStates::new(p, p.flux, 2, 4)?;
    let e = CouplingElements::from_states(&states);
    let f = LowEnergyLabels::from_states(&states);
    let analytic = match analytic_coefficients(&e, &f) {
        Ok(a) => Some(a),
        Err(Error::Resonance { .. }) => None,
        Err(other) => return Err(other),
    };
    Ok(SwPoint {
        pauli: pc.iter().collect(),
        min_singular: num_sw
            .singular_values
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min),
        analytic,
    })
}

pub fn run_sw(config: &JobConfig, out: &Path) -> Result<()> {
    let sec = config.sw.unwrap_or_default();
    let (sweep, grid) = sweep_points(config)?;
    let base = config.circuit.params()?;
    let points = map_grid(sweep.axis, &base, &grid, |p| sw_point(p, &sec))?;

    let mut cols = vec![sweep.axis.name().to_string()];
    cols.extend(points[0].pauli.iter().map(|(n, _)| format!("num_{n}")));
    cols.push("num_min_singular".into());
    for n in [
        "g_zz_plus",
        "g_zz_minus",
        "g_y",
        "g_yz",
        "omega_t",
        "omega_p",
        "min_ratio",
    ] {
        cols.push(format!("ana_{n}"));
    }
    cols.push("ana_perturbative".into());
    let mut table = Table::new(cols);
    table.comment("job: sw; num_* are Tr(P H_eff)/4 of the numerical effective Hamiltonian");
    table.comment("ana_* are second-order analytic couplings; nan where the detuning is resonant");
    table.comment(format!("axis: {}", sweep.axis.name()));
    for (v, pt) in grid.iter().zip(&points) {
        let mut row = vec![num(*v)];
        row.extend(pt.pauli.iter().map(|(_, x)| num(to_ghz(*x))));
        row.push(num(pt.min_singular));
        match &pt.analytic {
            Some(a) => {
                for x in [
                    a.g_zz_plus,
                    a.g_zz_minus,
                    a.g_y,
                    a.g_yz,
                    a.omega_t,
                    a.omega_p,
                ] {
                    row.push(num(to_ghz(x)));
                }
                row.push(num(a.min_ratio));
                row.push(a.perturbative.to_string());
            }
            None => {
                row.extend(std::iter::repeat("nan".to_string()).take(7));
                row.push("false".into());
            }
        }
        table.rows.push(row);
    }
    table.write(out)
}

#[derive(Serialize)]
struct DwellOut {
    flux: f64,
    time_ns: f64,
    zz_rate_ghz: f64,
    anticrossing_flux: Option<f64>,
    gap_ghz: Option<f64>,
}

/// [`GateReport`] in GHz and ns.
#[derive(Serialize)]
struct GateOut<'a> {
    kind: &'a str,
    model: Option<crate::gates::GateModel>,
    fidelity: f64,
    leakage: f64,
    parity_violation: f64,
    conditional_phase: Option<f64>,
    duration_ns: f64,
    dwell: Option<DwellOut>,
    virtual_z: Option<crate::gates::VirtualZ>,
    residual_z: Option<f64>,
    parity_protected: bool,
    notes: &'a [String],
    #[serde(serialize_with = "serialize_matrix")]
    unitary_p0: CMatrix,
    #[serde(serialize_with = "serialize_matrix")]
    unitary_corrected: CMatrix,
}

impl<'a> GateOut<'a> {
    fn new(r: &'a GateReport) -> Self {
        Self {
            kind: &r.kind,
            model: r.model,
            fidelity: r.fidelity,
            leakage: r.leakage,
            parity_violation: r.parity_violation,
            conditional_phase: r.conditional_phase,
            duration_ns: to_ns(r.duration),
            dwell: r.dwell.map(|d| DwellOut {
                flux: d.flux,
                time_ns: to_ns(d.time),
                zz_rate_ghz: to_ghz(d.zz_rate),
                anticrossing_flux: d.anticrossing_flux,
                gap_ghz: d.gap.map(to_ghz),
            }),
            virtual_z: r.virtual_z,
            residual_z: r.residual_z,
            parity_protected: r.parity_protected,
            notes: &r.notes,
            unitary_p0: r.unitary_p0.clone(),
            unitary_corrected: r.corrected(),
        }
    }
}

#[derive(Serialize)]
struct RwaOut {
    omega_t_ghz: f64,
    omega_p_ghz: f64,
    duration_ns: f64,
    couplings_ghz: RotatingCouplings,
    check: RwaCheck,
}

pub fn cz_options(g: &GateSection) -> CzOptions {
    CzOptions {
        phi: g.phi,
        model: g.model,
        ramp: if g.ramp_ns > 0.0 {
            Ramp::Cosine {
                duration: ns(g.ramp_ns),
            }
        } else {
            Ramp::Instant
        },
        margin: g.margin,
        dwell_mode: g.dwell_mode,
        dt: g.dt_ns.map(ns),
        calibrate: g.calibrate,
    }
}

pub fn single_options(g: &GateSection) -> SingleQubitOptions {
    SingleQubitOptions {
        levels: g.levels,
        amplitude: g.amplitude.map(ghz),
    }
}

/// Lab-frame couplings and frequencies from the numerical effective
/// Hamiltonian at the configured operating point.
pub fn rotating_couplings(p: &CircuitParams) -> Result<(RotatingCouplings, f64, f64)> {
    let model = ProductModel::at(p)?;
    let num_sw = product_sw(&model, &COMPUTATIONAL)?;
    let pc = pauli_coefficients(&num_sw.effective.matrix)?;
    let states = IslandStates::new(p, p.flux, 2, 4)?;
    let f = LowEnergyLabels::from_states(&states);
    let omega_t = f.omega(1, 0) - f.omega(0, 0);
    Ok((
        RotatingCouplings::from_pauli(&pc, omega_t),
        omega_t,
        pc.omega_p(),
    ))
}

pub fn run_gate(config: &JobConfig, out: &Path) -> Result<()> {
    let g = config.gate.ok_or_else(|| Error::Config {
        line: 0,
        message: "missing section [gate]".into(),
    })?;
    let p = config.circuit.params()?;
    let report = match g.kind {
        GateKind::RwaCheck => {
            let (gc, omega_t, omega_p) = rotating_couplings(&p)?;
            let duration = ns(g.duration_ns);
            let check = rwa_check(
                &gc,
                omega_t,
                omega_p,
                duration,
                g.variant,
                STEPS_PER_PERIOD as usize,
            )?;
            let conv = RotatingCouplings {
                g_zz_plus: to_ghz(gc.g_zz_plus),
                g_zz_minus: to_ghz(gc.g_zz_minus),
                g_y: to_ghz(gc.g_y),
                g_yz: to_ghz(gc.g_yz),
                g_xx: to_ghz(gc.g_xx),
                g_yy: to_ghz(gc.g_yy),
            };
            let res = RwaOut {
                omega_t_ghz: to_ghz(omega_t),
                omega_p_ghz: to_ghz(omega_p),
                duration_ns: g.duration_ns,
                couplings_ghz: conv,
                check,
            };
            return write_json(out, config, &res);
        }
        GateKind::Cz => cz_gate(&p, &cz_options(&g))?,
        GateKind::X => single_qubit_gate(&p, Axis::X, g.angle, &single_options(&g))?,
        GateKind::Y => single_qubit_gate(&p, Axis::Y, g.angle, &single_options(&g))?,
        GateKind::CnotTp | GateKind::CnotPt | GateKind::Swap => {
            let kind = match g.kind {
                GateKind::CnotTp => CompositeKind::CnotTp,
                GateKind::CnotPt => CompositeKind::CnotPt,
                _ => CompositeKind::Swap,
            };
            let opts = ComposeOptions {
                cz: cz_options(&g),
                single: single_options(&g),
                ideal_ppq: g.ideal_ppq,
            };
            compose_gate(kind, &p, &opts)?
        }
    };
    write_json(out, config, &GateOut::new(&report))
}
