//! Piecewise-constant time evolution under flux and error-pulse schedules.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use num_complex::Complex64;

use crate::linalg::{c, eigh, expm_i, unitarity_defect, CMatrix};

/// Allowed drift of `U†U` from the identity.
pub const UNITARITY_TOL: f64 = 1e-8;
/// Steps per period of the fastest frequency in the model.
pub const STEPS_PER_PERIOD: f64 = 100.0;

/// Instantaneous control values.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Control {
    pub flux: f64,
    /// rad/s
    pub eps_x: f64,
    /// rad/s
    pub eps_y: f64,
}

impl Control {
    pub fn at_flux(flux: f64) -> Self {
        Self {
            flux,
            ..Default::default()
        }
    }

    fn lerp(&self, other: &Control, s: f64) -> Control {
        Control {
            flux: self.flux + (other.flux - self.flux) * s,
            eps_x: self.eps_x + (other.eps_x - self.eps_x) * s,
            eps_y: self.eps_y + (other.eps_y - self.eps_y) * s,
        }
    }
}

/// Plateau of constant controls.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    /// Seconds.
    pub duration: f64,
    pub control: Control,
}

/// Transition between consecutive plateaus.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "kebab-case")]
pub enum Ramp {
    /// `(1 − cos πs)/2` over `duration` seconds.
    Cosine {
        duration: f64,
    },
    Instant,
}

impl Ramp {
    pub fn duration(&self) -> f64 {
        match self {
            Ramp::Cosine { duration } => *duration,
            Ramp::Instant => 0.0,
        }
    }
}

/// Idle → plateaus → idle, with a ramp before every plateau and one back
/// to idle at the end.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PulseSchedule {
    pub idle: Control,
    pub segments: Vec<Segment>,
    pub ramp: Ramp,
}

/// One piece of a discretized schedule.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Piece {
    Constant {
        duration: f64,
        control: Control,
    },
    Ramp {
        duration: f64,
        from: Control,
        to: Control,
    },
}

impl Piece {
    pub fn duration(&self) -> f64 {
        match self {
            Piece::Constant { duration, .. } | Piece::Ramp { duration, .. } => *duration,
        }
    }
}

impl PulseSchedule {
    pub fn new(idle: Control, segments: Vec<Segment>, ramp: Ramp) -> Result<Self> {
        let s = Self {
            idle,
            segments,
            ramp,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let flux_ok = |c: &Control| (0.0..=0.5).contains(&c.flux);
        if !flux_ok(&self.idle) {
            return Err(Error::InvalidArgument(format!(
                "idle flux {} outside [0, 0.5]",
                self.idle.flux
            )));
        }
        for (k, s) in self.segments.iter().enumerate() {
            if !(s.duration > 0.0 && s.duration.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "segment {k}: duration must be positive"
                )));
            }
            if !flux_ok(&s.control) {
                return Err(Error::InvalidArgument(format!(
                    "segment {k}: flux {} outside [0, 0.5]",
                    s.control.flux
                )));
            }
        }
        if let Ramp::Cosine { duration } = self.ramp {
            if !(duration > 0.0 && duration.is_finite()) {
                return Err(Error::InvalidArgument(
                    "ramp duration must be positive".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn pieces(&self) -> Vec<Piece> {
        let mut out = Vec::new();
        let mut current = self.idle;
        let ramp_to = |out: &mut Vec<Piece>, from: Control, to: Control| {
            if let Ramp::Cosine { duration } = self.ramp {
                if from != to {
                    out.push(Piece::Ramp { duration, from, to });
                }
            }
        };
        for s in &self.segments {
            ramp_to(&mut out, current, s.control);
            out.push(Piece::Constant {
                duration: s.duration,
                control: s.control,
            });
            current = s.control;
        }
        ramp_to(&mut out, current, self.idle);
        out
    }

    pub fn duration(&self) -> f64 {
        self.pieces().iter().map(Piece::duration).sum()
    }
}

/// Hamiltonian of a simulation model as a function of the controls.
pub trait HamiltonianBuilder {
    fn dim(&self) -> usize;
    fn hamiltonian(&self, control: &Control) -> Result<CMatrix>;
}

/// Largest step that resolves the spectral width of `h`.
pub fn auto_step(h: &CMatrix) -> f64 {
    let (vals, _) = eigh(h);
    let width = vals.last().copied().unwrap_or(0.0) - vals.first().copied().unwrap_or(0.0);
    if width <= 0.0 {
        return f64::INFINITY;
    }
    2.0 * std::f64::consts::PI / (STEPS_PER_PERIOD * width)
}

fn check_unitary(u: &CMatrix) -> Result<()> {
    let drift = unitarity_defect(u);
    if drift > UNITARITY_TOL {
        return Err(Error::StepSize { drift });
    }
    Ok(())
}

/// One fourth-order Magnus step over `[t, t + h]` (two Gauss points).
pub fn magnus4_step<F: Fn(f64) -> Result<CMatrix>>(ham: F, t: f64, h: f64) -> Result<CMatrix> {
    let d = 3f64.sqrt() / 6.0;
    let h1 = ham(t + (0.5 - d) * h)?;
    let h2 = ham(t + (0.5 + d) * h)?;
    let avg = (&h1 + &h2) * c(0.5);
    let comm = &h2 * &h1 - &h1 * &h2;
    let heff = avg - comm * Complex64::new(0.0, 3f64.sqrt() * h / 12.0);
    Ok(expm_i(&heff, h))
}

/// Propagator of a single piece (fourth-order Magnus on ramps).
pub fn piece_propagator<B: HamiltonianBuilder + ?Sized>(
    builder: &B,
    piece: &Piece,
    dt: f64,
) -> Result<CMatrix> {
    let n = builder.dim();
    match *piece {
        Piece::Constant { duration, control } => {
            Ok(expm_i(&builder.hamiltonian(&control)?, duration))
        }
        Piece::Ramp { duration, from, to } => {
            let steps = (duration / dt).ceil().max(1.0) as usize;
            let h = duration / steps as f64;
            let mut u = CMatrix::identity(n, n);
            let at = |t: f64| {
                let shape = 0.5 * (1.0 - (std::f64::consts::PI * t / duration).cos());
                builder.hamiltonian(&from.lerp(&to, shape))
            };
            for k in 0..steps {
                u = magnus4_step(at, k as f64 * h, h)? * u;
            }
            Ok(u)
        }
    }
}

/// Checks an explicit step against [`auto_step`] at `reference`, or
/// returns the automatic step.
pub fn resolve_step<B: HamiltonianBuilder + ?Sized>(
    builder: &B,
    reference: &Control,
    dt: Option<f64>,
) -> Result<f64> {
    let limit = auto_step(&builder.hamiltonian(reference)?);
    match dt {
        Some(d) if !(d > 0.0) => Err(Error::InvalidArgument("dt must be positive".into())),
        Some(d) if d > limit * (1.0 + 1e-12) => Err(Error::InvalidArgument(format!(
            "dt = {d:.3e} s does not resolve the fastest frequency (limit {limit:.3e} s)"
        ))),
        Some(d) => Ok(d),
        None => Ok(limit),
    }
}

/// Time-ordered propagator of the whole schedule. `dt` defaults to
/// [`auto_step`] at the idle point; a larger explicit step is rejected.
pub fn propagate<B: HamiltonianBuilder + ?Sized>(
    schedule: &PulseSchedule,
    builder: &B,
    dt: Option<f64>,
) -> Result<CMatrix> {
    schedule.validate()?;
    let n = builder.dim();
    let dt = resolve_step(builder, &schedule.idle, dt)?;
    let mut u = CMatrix::identity(n, n);
    for piece in schedule.pieces() {
        u = piece_propagator(builder, &piece, dt)? * u;
    }
    check_unitary(&u)?;
    Ok(u)
}

/// Fourth-order Magnus propagator of an explicitly time-dependent
/// Hamiltonian on `[0, t_end]`.
pub fn propagate_fn<F: Fn(f64) -> CMatrix>(h: F, t_end: f64, dt: f64) -> Result<CMatrix> {
    if !(t_end >= 0.0) || !(dt > 0.0) {
        return Err(Error::InvalidArgument(
            "t_end must be non-negative and dt positive".into(),
        ));
    }
    let n = h(0.0).nrows();
    let steps = (t_end / dt).ceil() as usize;
    let mut u = CMatrix::identity(n, n);
    if steps == 0 {
        return Ok(u);
    }
    let step = t_end / steps as f64;
    for k in 0..steps {
        u = magnus4_step(|t| Ok(h(t)), k as f64 * step, step)? * u;
    }
    check_unitary(&u)?;
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{diag, max_abs};

    struct Diagonal(Vec<f64>);

    impl HamiltonianBuilder for Diagonal {
        fn dim(&self) -> usize {
            self.0.len()
        }
        fn hamiltonian(&self, control: &Control) -> Result<CMatrix> {
            let v: Vec<f64> = self.0.iter().map(|e| e * (1.0 + control.flux)).collect();
            Ok(diag(&v))
        }
    }

    #[test]
    fn empty_schedule_is_identity() {
        let s = PulseSchedule::new(Control::default(), vec![], Ramp::Cosine { duration: 1e-9 })
            .unwrap();
        let u = propagate(&s, &Diagonal(vec![0.0, 1e9, 3e9]), None).unwrap();
        assert_eq!(u, CMatrix::identity(3, 3));
        assert_eq!(s.duration(), 0.0);
    }

    #[test]
    fn constant_diagonal_phases() {
        let e = vec![0.0, 2.1e9, 5.3e9];
        let t = 7.7e-9;
        let s = PulseSchedule::new(
            Control::default(),
            vec![Segment {
                duration: t,
                control: Control::default(),
            }],
            Ramp::Instant,
        )
        .unwrap();
        let u = propagate(&s, &Diagonal(e.clone()), None).unwrap();
        for (k, ek) in e.iter().enumerate() {
            assert!((u[(k, k)] - Complex64::from_polar(1.0, -ek * t)).norm() < 1e-10);
        }
    }

    #[test]
    fn cosine_ramp_integrates_phase() {
        // ∫ E(1 + Φ(t)) dt with Φ from 0 to 0.2 and back.
        let e = 1e9;
        let tr = 2e-9;
        let s = PulseSchedule::new(
            Control::default(),
            vec![Segment {
                duration: 1e-9,
                control: Control::at_flux(0.2),
            }],
            Ramp::Cosine { duration: tr },
        )
        .unwrap();
        let u = propagate(&s, &Diagonal(vec![0.0, e]), Some(1e-12)).unwrap();
        let phase = e * (2.0 * tr * 1.1 + 1e-9 * 1.2);
        assert!((u[(1, 1)] - Complex64::from_polar(1.0, -phase)).norm() < 1e-8);
        assert!((s.duration() - 5e-9).abs() < 1e-20);
    }

    #[test]
    fn rejects_coarse_steps_and_bad_segments() {
        let s = PulseSchedule::new(
            Control::default(),
            vec![Segment {
                duration: 1e-9,
                control: Control::at_flux(0.2),
            }],
            Ramp::Cosine { duration: 1e-9 },
        )
        .unwrap();
        assert!(propagate(&s, &Diagonal(vec![0.0, 1e10]), Some(1e-10)).is_err());
        let bad = PulseSchedule::new(
            Control::default(),
            vec![Segment {
                duration: 0.0,
                control: Control::default(),
            }],
            Ramp::Instant,
        );
        assert!(bad.is_err());
        let bad = PulseSchedule::new(
            Control::default(),
            vec![Segment {
                duration: 1e-9,
                control: Control::at_flux(0.7),
            }],
            Ramp::Instant,
        );
        assert!(bad.is_err());
    }

    #[test]
    fn time_dependent_rabi() {
        // resonant drive in the lab frame, checked against the RWA flip
        let w = 2e10;
        let g = 1e8;
        let h = |t: f64| {
            let mut m = diag(&[0.5 * w, -0.5 * w]);
            m[(0, 1)] = c(2.0 * g * (w * t).cos());
            m[(1, 0)] = m[(0, 1)];
            m
        };
        let t = std::f64::consts::PI / (2.0 * g);
        let u = propagate_fn(h, t, 2.0 * std::f64::consts::PI / w / 200.0).unwrap();
        assert!(u[(0, 1)].norm() > 0.99);
        assert!(max_abs(&(u.adjoint() * &u - CMatrix::identity(2, 2))) < 1e-8);
    }
}
