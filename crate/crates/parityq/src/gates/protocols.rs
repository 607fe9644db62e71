//! CZ, single-qubit and composite gate protocols.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::fidelity::{
    conditional_phase, cz_target, gate_fidelity, leakage, virtual_z_calibrate, wrap_phase, VirtualZ,
};
use super::models::{GateModel, GateSystem};
use super::propagate::{piece_propagator, resolve_step, Control, Piece, Ramp};
use super::serialize_matrix;
use crate::circuit_ops::CircuitParams;
use crate::coupled::{
    golden_min, locate_anticrossing, uncoupled_detuning, Anticrossing, AnticrossingResult,
    IslandStates, COMPUTATIONAL,
};
use crate::error::{Error, Result};
use crate::linalg::{c, eigh, expm_i, kron, CMatrix, I};
use crate::spectra::{design_condition, Parity};
use crate::sw::{direct_rotation, pauli_coefficients, Selection};

/// Default plateau distance from the 10 ↔ 03 anti-crossing, in units of
/// its minimal gap.
pub const DEFAULT_MARGIN: f64 = 3.0;
/// Default cosine ramp, seconds.
pub const DEFAULT_RAMP: f64 = 1e-9;
/// Dwell times beyond this are refused as "rate too small".
pub const MAX_DWELL: f64 = 1e-5;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DwellMode {
    /// Dispersive plateau a margin away from the anti-crossing.
    #[default]
    Detuned,
    /// Full Rabi cycle through |0_t 3_p⟩ at the anti-crossing.
    Resonant,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CzOptions {
    /// Target conditional phase, radians.
    pub phi: f64,
    pub model: GateModel,
    pub ramp: Ramp,
    pub margin: f64,
    pub dwell_mode: DwellMode,
    /// Integration step for ramps, seconds; automatic when absent.
    pub dt: Option<f64>,
    /// Fine-tune the dwell time on the simulated phase and fidelity.
    pub calibrate: bool,
}

impl Default for CzOptions {
    fn default() -> Self {
        Self {
            phi: PI,
            model: GateModel::Six,
            ramp: Ramp::Cosine {
                duration: DEFAULT_RAMP,
            },
            margin: DEFAULT_MARGIN,
            dwell_mode: DwellMode::Detuned,
            dt: None,
            calibrate: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DwellInfo {
    pub flux: f64,
    /// Seconds.
    pub time: f64,
    /// `g^zz_−` at the plateau, rad/s.
    pub zz_rate: f64,
    /// Flux of the 10 ↔ 03 anti-crossing, if located.
    pub anticrossing_flux: Option<f64>,
    /// Its minimal gap, rad/s.
    pub gap: Option<f64>,
}

/// Outcome of a simulated gate.
#[derive(Clone, Debug, Serialize)]
pub struct GateReport {
    pub kind: String,
    pub model: Option<GateModel>,
    /// Computational block in the rotating frame, before virtual Z.
    #[serde(serialize_with = "serialize_matrix")]
    pub unitary_p0: CMatrix,
    pub conditional_phase: Option<f64>,
    pub leakage: f64,
    pub parity_violation: f64,
    /// Average gate fidelity after the virtual-Z correction.
    pub fidelity: f64,
    /// Seconds.
    pub duration: f64,
    pub virtual_z: Option<VirtualZ>,
    pub dwell: Option<DwellInfo>,
    /// Z rotation accumulated from the PPQ splitting during a pulse.
    pub residual_z: Option<f64>,
    pub parity_protected: bool,
    pub notes: Vec<String>,
}

impl GateReport {
    /// `unitary_p0` with the virtual-Z correction applied.
    pub fn corrected(&self) -> CMatrix {
        match &self.virtual_z {
            Some(z) => z.apply(&self.unitary_p0),
            None => self.unitary_p0.clone(),
        }
    }
}

/// Ramps and plateau of one CZ run, reusable for any dwell time.
struct CzRun<'a> {
    system: &'a GateSystem,
    up: CMatrix,
    down: CMatrix,
    dwell_values: Vec<f64>,
    dwell_vectors: CMatrix,
    ramp_time: f64,
}

impl<'a> CzRun<'a> {
    fn new(system: &'a GateSystem, opts: &CzOptions, dwell: Control) -> Result<Self> {
        let b = system.builder();
        let dt = resolve_step(b, &system.idle, opts.dt)?;
        let n = system.dim();
        let (up, down, ramp_time) = match opts.ramp {
            Ramp::Cosine { duration } if duration > 0.0 => (
                piece_propagator(
                    b,
                    &Piece::Ramp {
                        duration,
                        from: system.idle,
                        to: dwell,
                    },
                    dt,
                )?,
                piece_propagator(
                    b,
                    &Piece::Ramp {
                        duration,
                        from: dwell,
                        to: system.idle,
                    },
                    dt,
                )?,
                duration,
            ),
            _ => (CMatrix::identity(n, n), CMatrix::identity(n, n), 0.0),
        };
        let (dwell_values, dwell_vectors) = eigh(&b.hamiltonian(&dwell)?);
        Ok(Self {
            system,
            up,
            down,
            dwell_values,
            dwell_vectors,
            ramp_time,
        })
    }

    fn propagator(&self, t: f64) -> CMatrix {
        let v = &self.dwell_vectors;
        let mut e = v.clone();
        for (k, lam) in self.dwell_values.iter().enumerate() {
            let ph = Complex64::from_polar(1.0, -lam * t);
            for i in 0..e.nrows() {
                e[(i, k)] *= ph;
            }
        }
        &self.down * (e * v.adjoint()) * &self.up
    }

    fn duration(&self, t: f64) -> f64 {
        2.0 * self.ramp_time + t
    }

    fn block(&self, t: f64) -> CMatrix {
        self.system
            .logical_block(&self.propagator(t), self.duration(t))
    }

    fn infidelity(&self, t: f64, target: &CMatrix) -> Result<f64> {
        let b = self.block(t);
        let z = virtual_z_calibrate(&b, target)?;
        Ok(1.0 - gate_fidelity(&z.apply(&b), target))
    }

    fn report(&self, t: f64, target: &CMatrix, kind: &str) -> Result<GateReport> {
        let u = self.propagator(t);
        let block = self.system.logical_block(&u, self.duration(t));
        let z = virtual_z_calibrate(&block, target)?;
        let p = &self.system.params;
        Ok(GateReport {
            kind: kind.into(),
            model: Some(self.system.model),
            conditional_phase: Some(conditional_phase(&block)),
            leakage: leakage(&block),
            parity_violation: self.system.parity_violation(&u),
            fidelity: gate_fidelity(&z.apply(&block), target),
            duration: self.duration(t),
            virtual_z: Some(z),
            dwell: None,
            residual_z: None,
            parity_protected: p.eps_x == 0.0 && p.eps_y == 0.0,
            notes: Vec::new(),
            unitary_p0: block,
        })
    }
}

/// ZZ rate `g^zz_−` of the model Hamiltonian at `control`.
fn zz_rate(system: &GateSystem, control: &Control) -> Result<f64> {
    let h = system.builder().hamiltonian(control)?;
    let h4 = if system.dim() == 4 {
        h
    } else {
        // logical labels sit on the unit vectors closest to `logical`
        direct_rotation(
            &system.logical,
            &h,
            Selection::MaxOverlap,
            COMPUTATIONAL.to_vec(),
        )?
        .effective
        .matrix
    };
    Ok(pauli_coefficients(&h4)?.g_zz_minus())
}

/// Flux between idle and the anti-crossing where the uncoupled detuning
/// equals `2|λ|√(m² − 1)`, i.e. where the coupled gap is `m` times the
/// minimal one.
fn detuned_flux(params: &CircuitParams, ac: &AnticrossingResult, margin: f64) -> Result<f64> {
    if !(margin > 1.0) {
        return Err(Error::InvalidArgument(format!(
            "margin must exceed 1, got {margin}"
        )));
    }
    let target = 2.0 * ac.coupling * (margin * margin - 1.0).sqrt();
    let f = |x: f64| uncoupled_detuning(params, ac.which, x).map(f64::abs);
    let (mut lo, mut hi) = (params.flux, ac.uncoupled_flux);
    if f(lo)? <= target {
        return Err(Error::InvalidArgument(format!(
            "idle point is already within {margin} gaps of the {} anti-crossing",
            ac.which
        )));
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if f(mid)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Plateau control and diagnostics for the chosen dwell mode.
fn dwell_point(params: &CircuitParams, opts: &CzOptions) -> Result<(Control, AnticrossingResult)> {
    let ac = locate_anticrossing(params, Anticrossing::Ten03)?;
    let flux = match opts.dwell_mode {
        DwellMode::Resonant => ac.flux,
        DwellMode::Detuned => {
            let mut flux = detuned_flux(params, &ac, opts.margin)?;
            if let Ok(other) = locate_anticrossing(params, Anticrossing::Eleven02) {
                if other.uncoupled_flux > params.flux {
                    flux = flux.min(detuned_flux(params, &other, opts.margin)?);
                }
            }
            flux
        }
    };
    Ok((
        Control {
            flux,
            eps_x: params.eps_x,
            eps_y: params.eps_y,
        },
        ac,
    ))
}

/// Flux-pulse CZ^{10}_φ: ramp from idle to a plateau near the 10 ↔ 03
/// anti-crossing, dwell, ramp back; the dwell time is set from the ZZ rate
/// and, with `calibrate`, refined on the simulated propagator.
pub fn cz_gate(params: &CircuitParams, opts: &CzOptions) -> Result<GateReport> {
    params.validate()?;
    let mut notes = Vec::new();
    if !design_condition(params)?.satisfied {
        notes.push("design condition ω02 < ω10 violated".to_string());
    }
    let system = GateSystem::new(params, opts.model)?;
    let (dwell, ac) = dwell_point(params, opts)?;
    let rate = zz_rate(&system, &dwell)?;
    let run = CzRun::new(&system, opts, dwell)?;
    let target = cz_target(opts.phi);

    let time = match opts.dwell_mode {
        DwellMode::Detuned => {
            if rate.abs() * MAX_DWELL < PI {
                return Err(Error::ZeroRate(format!(
                    "ZZ rate {:.3e} rad/s at flux {:.4} is too small for a CZ",
                    rate, dwell.flux
                )));
            }
            // conditional phase advances as −g^zz_− t
            let slope = -rate;
            let period = 2.0 * PI / slope.abs();
            let offset = if opts.calibrate {
                conditional_phase(&run.block(0.0))
            } else {
                0.0
            };
            let mut t = ((opts.phi - offset) / slope).rem_euclid(period);
            if opts.calibrate {
                for _ in 0..3 {
                    t += wrap_phase(opts.phi - conditional_phase(&run.block(t))) / slope;
                    if t < 0.0 {
                        t += period;
                    }
                }
                let w = 0.01 * period;
                t = golden_min(
                    |x| run.infidelity(x, &target),
                    (t - w).max(0.0),
                    t + w,
                    1e-6 * period,
                )?
                .0;
            }
            t
        }
        DwellMode::Resonant => {
            let t0 = 2.0 * PI / ac.gap;
            if opts.calibrate {
                golden_min(
                    |x| run.infidelity(x, &target),
                    0.8 * t0,
                    1.2 * t0,
                    1e-6 * t0,
                )?
                .0
            } else {
                t0
            }
        }
    };
    let mut report = run.report(time, &target, "cz")?;
    report.dwell = Some(DwellInfo {
        flux: dwell.flux,
        time,
        zz_rate: rate,
        anticrossing_flux: Some(ac.flux),
        gap: Some(ac.gap),
    });
    report.notes.extend(notes);
    Ok(report)
}

/// CZ schedule with a prescribed plateau flux and dwell time, no
/// calibration; fidelity is evaluated against `CZ^{10}_{opts.phi}`.
pub fn cz_with_dwell(
    params: &CircuitParams,
    opts: &CzOptions,
    flux: f64,
    time: f64,
) -> Result<GateReport> {
    params.validate()?;
    if !(time >= 0.0) {
        return Err(Error::InvalidArgument(
            "dwell time must be non-negative".into(),
        ));
    }
    let system = GateSystem::new(params, opts.model)?;
    let dwell = Control {
        flux,
        eps_x: params.eps_x,
        eps_y: params.eps_y,
    };
    let rate = zz_rate(&system, &dwell)?;
    let run = CzRun::new(&system, opts, dwell)?;
    let mut report = run.report(time, &cz_target(opts.phi), "cz")?;
    report.dwell = Some(DwellInfo {
        flux,
        time,
        zz_rate: rate,
        anticrossing_flux: None,
        gap: None,
    });
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axis {
    X,
    Y,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SingleQubitOptions {
    /// PPQ levels kept in the simulation.
    pub levels: usize,
    /// Pulse amplitude ε, rad/s; defaults to the error amplitude in the
    /// parameters, else 0.04 E_J,p (x) or 0.2 E_J,p (y).
    pub amplitude: Option<f64>,
}

impl Default for SingleQubitOptions {
    fn default() -> Self {
        Self {
            levels: 2,
            amplitude: None,
        }
    }
}

/// `exp(−iθσ/2)` on [|1⟩, |0⟩].
pub fn rotation(axis: Axis, angle: f64) -> CMatrix {
    let (ch, sh) = ((0.5 * angle).cos(), (0.5 * angle).sin());
    let mut m = CMatrix::identity(2, 2) * c(ch);
    match axis {
        Axis::X => {
            m[(0, 1)] = -I * sh;
            m[(1, 0)] = -I * sh;
        }
        Axis::Y => {
            m[(0, 1)] = c(-sh);
            m[(1, 0)] = c(sh);
        }
    }
    m
}

/// Square ε^x or ε^y pulse on the isolated PPQ. Duration is
/// `|angle| / (2|δh|)`.
pub fn single_qubit_gate(
    params: &CircuitParams,
    axis: Axis,
    angle: f64,
    opts: &SingleQubitOptions,
) -> Result<GateReport> {
    params.validate()?;
    let k = opts.levels;
    if k < 2 {
        return Err(Error::InvalidArgument(
            "single-qubit simulation needs at least 2 levels".into(),
        ));
    }
    let states = IslandStates::new(params, params.flux, 2, k.max(4))?;
    let ppq = &states.ppq;
    // δh per unit amplitude
    let rate = match axis {
        Axis::X => -states.cos_p[(0, 1)].re,
        Axis::Y => -states.sin_p[(0, 1)].im,
    };
    let scale = states.cos_p[(0, 1)]
        .norm()
        .max(states.sin_p[(0, 1)].norm())
        .max(1e-300);
    if rate.abs() < 1e-9 * scale.max(1e-3) {
        return Err(Error::ZeroRate(match axis {
            Axis::Y => format!("sin(π n_g,p) = 0 at n_g,p = {}", params.n_g_p),
            Axis::X => "vanishing cos φ_p element between the qubit states".into(),
        }));
    }
    let default_amp = match axis {
        Axis::X if params.eps_x != 0.0 => params.eps_x.abs(),
        Axis::Y if params.eps_y != 0.0 => params.eps_y.abs(),
        Axis::X => 0.04 * params.e_j_p,
        Axis::Y => 0.2 * params.e_j_p,
    };
    let amp = opts.amplitude.map(f64::abs).unwrap_or(default_amp);
    if !(amp > 0.0) {
        return Err(Error::InvalidArgument(
            "pulse amplitude must be positive".into(),
        ));
    }
    let eps = amp * angle.signum() * rate.signum();
    let dh = eps * rate;
    let duration = if angle == 0.0 {
        0.0
    } else {
        angle.abs() / (2.0 * dh.abs())
    };
    let e0 = ppq.eigenvalues[0];
    let mut h = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        k,
        (0..k).map(|i| c(ppq.eigenvalues[i] - e0)),
    ));
    let (cos, sin) = (
        states.cos_p.view((0, 0), (k, k)),
        states.sin_p.view((0, 0), (k, k)),
    );
    match axis {
        Axis::X => h -= cos * c(eps),
        Axis::Y => h -= sin * c(eps),
    }
    let u = expm_i(&h, duration);
    let idx = [1usize, 0];
    let block = CMatrix::from_fn(2, 2, |i, j| u[(idx[i], idx[j])]);
    let parity = ppq.parity.as_ref().expect("ppq spectrum carries parity");
    let mut violation = 0.0f64;
    for &col in &idx {
        let own = parity[col];
        let w: f64 = (0..k)
            .filter(|&i| {
                matches!(
                    (own, parity[i]),
                    (Parity::Even, Parity::Odd) | (Parity::Odd, Parity::Even)
                )
            })
            .map(|i| u[(i, col)].norm_sqr())
            .sum();
        violation = violation.max(w);
    }
    let residual = ppq.transition(1) * duration;
    let mut notes = vec!["parity protection is lifted while the pulse is on".to_string()];
    if residual.abs() > 1e-3 {
        notes.push(format!(
            "PPQ splitting adds a Z rotation of {residual:.4} rad"
        ));
    }
    Ok(GateReport {
        kind: format!(
            "{}({angle:.6})",
            match axis {
                Axis::X => "x",
                Axis::Y => "y",
            }
        ),
        model: None,
        conditional_phase: None,
        leakage: leakage(&block),
        parity_violation: violation,
        fidelity: gate_fidelity(&block, &rotation(axis, angle)),
        duration,
        virtual_z: None,
        dwell: None,
        residual_z: Some(residual),
        parity_protected: false,
        notes,
        unitary_p0: block,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompositeKind {
    /// Transmon control, PPQ target.
    CnotTp,
    /// PPQ control, transmon target.
    CnotPt,
    Swap,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ComposeOptions {
    pub cz: CzOptions,
    pub single: SingleQubitOptions,
    /// Replace the simulated PPQ pulses by exact rotations.
    pub ideal_ppq: bool,
}

impl Default for ComposeOptions {
    fn default() -> Self {
        Self {
            cz: CzOptions::default(),
            single: SingleQubitOptions::default(),
            ideal_ppq: false,
        }
    }
}

fn on_ppq(u: &CMatrix) -> CMatrix {
    kron(&CMatrix::identity(2, 2), u)
}

/// `|0⟩ → |+⟩` on [|1⟩, |0⟩], i.e. `(σ^x − σ^z)/√2` here.
fn hadamard() -> CMatrix {
    let mut h = CMatrix::from_element(2, 2, c(1.0));
    h[(0, 0)] = c(-1.0);
    h * c(std::f64::consts::FRAC_1_SQRT_2)
}

fn projector(excited: bool) -> CMatrix {
    let mut p = CMatrix::zeros(2, 2);
    let k = if excited { 0 } else { 1 };
    p[(k, k)] = c(1.0);
    p
}

/// Ideal targets on [11, 10, 01, 00].
pub fn composite_target(kind: CompositeKind) -> CMatrix {
    let x = rotation(Axis::X, PI) * I;
    let id = CMatrix::identity(2, 2);
    match kind {
        CompositeKind::CnotTp => kron(&projector(true), &x) + kron(&projector(false), &id),
        CompositeKind::CnotPt => kron(&x, &projector(true)) + kron(&id, &projector(false)),
        CompositeKind::Swap => {
            let mut s = CMatrix::identity(4, 4);
            s.swap_rows(1, 2);
            s
        }
    }
}

/// CNOT and SWAP from a calibrated CZ^{10}_π and PPQ y rotations; transmon
/// Hadamards are ideal, the PPQ Hadamard is `R_y(−π/2)` after a virtual Z
/// (equal to the Hadamard up to a global sign).
pub fn compose_gate(
    kind: CompositeKind,
    params: &CircuitParams,
    opts: &ComposeOptions,
) -> Result<GateReport> {
    let cz = cz_gate(params, &CzOptions { phi: PI, ..opts.cz })?;
    let ppq_params = params.with_n_g_p(0.5).with_errors(0.0, 0.0);
    let pulse = |angle: f64| -> Result<(CMatrix, f64)> {
        if opts.ideal_ppq {
            Ok((rotation(Axis::Y, angle), 0.0))
        } else {
            let r = single_qubit_gate(&ppq_params, Axis::Y, angle, &opts.single)?;
            Ok((r.unitary_p0, r.duration))
        }
    };
    let (yp, t_yp) = pulse(PI / 2.0)?;
    let (ym, t_ym) = pulse(-PI / 2.0)?;
    let z = on_ppq(&CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        c(1.0),
        c(-1.0),
    ])));
    let czm = cz.corrected();
    let cnot_tp = on_ppq(&yp) * &czm * on_ppq(&ym);
    let t_cnot_tp = cz.duration + t_yp + t_ym;
    let h_both = kron(&hadamard(), &(&ym * z.view((0, 0), (2, 2))));
    let (u, duration, n_cz) = match kind {
        CompositeKind::CnotTp => (cnot_tp, t_cnot_tp, 1),
        CompositeKind::CnotPt => (&h_both * &cnot_tp * &h_both, t_cnot_tp + 2.0 * t_ym, 1),
        CompositeKind::Swap => {
            let pt = &h_both * &cnot_tp * &h_both;
            (&cnot_tp * pt * &cnot_tp, 3.0 * t_cnot_tp + 2.0 * t_ym, 3)
        }
    };
    let target = composite_target(kind);
    let name = match kind {
        CompositeKind::CnotTp => "cnot-tp",
        CompositeKind::CnotPt => "cnot-pt",
        CompositeKind::Swap => "swap",
    };
    let mut notes = vec![
        "transmon single-qubit gates are ideal".to_string(),
        "PPQ pulses run at n_g,p = 0.5 with the transmon idle".to_string(),
    ];
    notes.extend(cz.notes.iter().cloned());
    Ok(GateReport {
        kind: name.into(),
        model: cz.model,
        conditional_phase: None,
        leakage: leakage(&u),
        parity_violation: cz.parity_violation,
        fidelity: gate_fidelity(&u, &target),
        duration,
        virtual_z: None,
        dwell: cz.dwell.map(|d| DwellInfo {
            time: d.time * n_cz as f64,
            ..d
        }),
        residual_z: None,
        parity_protected: false,
        notes,
        unitary_p0: u,
    })
}

/// `|⟨0_t ψ_p| U |ψ_t 0_p⟩|²` for `ψ = α|0⟩ + β|1⟩` (normalized here).
pub fn transfer_fidelity(u: &CMatrix, alpha: Complex64, beta: Complex64) -> f64 {
    let n = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
    let (a, b) = (alpha / n, beta / n);
    // [11, 10, 01, 00]
    let input = nalgebra::DVector::from_vec(vec![c(0.0), b, c(0.0), a]);
    let expect = nalgebra::DVector::from_vec(vec![c(0.0), c(0.0), b, a]);
    (expect.adjoint() * (u * input))[(0, 0)].norm_sqr()
}
