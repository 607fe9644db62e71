//! TOML job configuration. Energies are given in GHz (E/2π), times in ns.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::circuit_ops::CircuitParams;
use crate::error::{Error, Result};
use crate::gates::{DwellMode, GateModel};
use crate::sw::RwaVariant;
use crate::units::ghz;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum JobKind {
    Spectrum,
    Sw,
    Gate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub circuit: CircuitSection,
    pub sweep: Option<SweepSection>,
    pub spectrum: Option<SpectrumSection>,
    pub sw: Option<SwSection>,
    pub gate: Option<GateSection>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitSection {
    pub e_j_t: f64,
    pub e_c_t: f64,
    pub e_j_p: f64,
    pub e_c_p: f64,
    pub e_c_c: f64,
    #[serde(default)]
    pub n_g_t: f64,
    #[serde(default)]
    pub n_g_p: f64,
    /// Φ_ext/Φ₀
    #[serde(default)]
    pub flux: f64,
    #[serde(default)]
    pub eps_x: f64,
    #[serde(default)]
    pub eps_y: f64,
}

impl CircuitSection {
    pub fn params(&self) -> Result<CircuitParams> {
        let mut p =
            CircuitParams::from_ghz(self.e_j_t, self.e_c_t, self.e_j_p, self.e_c_p, self.e_c_c);
        p.n_g_t = self.n_g_t;
        p.n_g_p = self.n_g_p;
        p.flux = self.flux;
        p.eps_x = ghz(self.eps_x);
        p.eps_y = ghz(self.eps_y);
        p.validate()?;
        Ok(p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxisKind {
    Flux,
    NGP,
    NGT,
    ECC,
    EpsX,
    EpsY,
}

impl SweepAxisKind {
    pub fn name(&self) -> &'static str {
        match self {
            SweepAxisKind::Flux => "flux",
            SweepAxisKind::NGP => "n_g_p",
            SweepAxisKind::NGT => "n_g_t",
            SweepAxisKind::ECC => "e_c_c",
            SweepAxisKind::EpsX => "eps_x",
            SweepAxisKind::EpsY => "eps_y",
        }
    }

    /// Applies a grid value (GHz for energies) to a copy of `p`.
    pub fn apply(&self, p: &CircuitParams, value: f64) -> CircuitParams {
        let mut q = *p;
        match self {
            SweepAxisKind::Flux => q.flux = value,
            SweepAxisKind::NGP => q.n_g_p = value,
            SweepAxisKind::NGT => q.n_g_t = value,
            SweepAxisKind::ECC => q.e_c_c = ghz(value),
            SweepAxisKind::EpsX => q.eps_x = ghz(value),
            SweepAxisKind::EpsY => q.eps_y = ghz(value),
        }
        q
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub axis: SweepAxisKind,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl SweepSection {
    pub fn grid(&self) -> Result<Vec<f64>> {
        if self.points == 0 {
            return Err(Error::InvalidArgument(
                "sweep grid is empty (points = 0)".into(),
            ));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(Error::InvalidArgument("sweep bounds must be finite".into()));
        }
        if self.points == 1 {
            return Ok(vec![self.start]);
        }
        let step = (self.stop - self.start) / (self.points - 1) as f64;
        Ok((0..self.points)
            .map(|k| self.start + step * k as f64)
            .collect())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumModel {
    /// Coupled product-basis model.
    #[default]
    Coupled,
    /// Six-label low-energy projection.
    Six,
    Transmon,
    Ppq,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumSection {
    pub model: SpectrumModel,
    pub levels: usize,
    /// Also write charge-basis amplitudes (single-island models).
    pub wavefunctions: bool,
}

impl Default for SpectrumSection {
    fn default() -> Self {
        Self {
            model: SpectrumModel::Coupled,
            levels: 6,
            wavefunctions: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SwSection {
    pub levels_t: usize,
    pub levels_p: usize,
}

impl Default for SwSection {
    fn default() -> Self {
        Self {
            levels_t: crate::coupled::DEFAULT_LEVELS_T,
            levels_p: crate::coupled::DEFAULT_LEVELS_P,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GateKind {
    Cz,
    CnotTp,
    CnotPt,
    Swap,
    X,
    Y,
    RwaCheck,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GateSection {
    pub kind: GateKind,
    /// CZ conditional phase, rad.
    pub phi: f64,
    pub model: GateModel,
    /// Cosine ramp length; 0 for an instantaneous step.
    pub ramp_ns: f64,
    pub margin: f64,
    pub dwell_mode: DwellMode,
    pub dt_ns: Option<f64>,
    pub calibrate: bool,
    /// Single-qubit rotation angle, rad.
    pub angle: f64,
    pub levels: usize,
    pub amplitude: Option<f64>,
    pub ideal_ppq: bool,
    /// RWA check: propagation time and fast-term family.
    pub duration_ns: f64,
    pub variant: RwaVariant,
}

impl Default for GateSection {
    fn default() -> Self {
        Self {
            kind: GateKind::Cz,
            phi: PI,
            model: GateModel::Six,
            ramp_ns: 1.0,
            margin: crate::gates::DEFAULT_MARGIN,
            dwell_mode: DwellMode::Detuned,
            dt_ns: None,
            calibrate: true,
            angle: PI,
            levels: 2,
            amplitude: None,
            ideal_ppq: false,
            duration_ns: 20.0,
            variant: RwaVariant::Drive,
        }
    }
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())]
        .bytes()
        .filter(|&b| b == b'\n')
        .count()
        + 1
}

impl JobConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str::<JobConfig>(text).map_err(|e| Error::Config {
            line: e.span().map(|s| line_of(text, s.start)).unwrap_or(0),
            message: e.message().to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    /// Checks that the sections needed by `kind` are present and no others.
    pub fn check_for(&self, kind: JobKind) -> Result<()> {
        let fail = |m: &str| {
            Err(Error::Config {
                line: 0,
                message: m.to_string(),
            })
        };
        let present = [
            ("spectrum", self.spectrum.is_some(), JobKind::Spectrum),
            ("sw", self.sw.is_some(), JobKind::Sw),
            ("gate", self.gate.is_some(), JobKind::Gate),
        ];
        for (name, here, owner) in present {
            if here && owner != kind {
                return fail(&format!(
                    "section [{name}] does not belong to a {kind:?} job"
                ));
            }
        }
        match kind {
            JobKind::Spectrum | JobKind::Sw => {
                let Some(s) = &self.sweep else {
                    return fail("missing section [sweep]");
                };
                s.grid()?;
            }
            JobKind::Gate => {
                if self.sweep.is_some() {
                    return fail("gate jobs take no [sweep]");
                }
                if self.gate.is_none() {
                    return fail("missing section [gate]");
                }
            }
        }
        self.circuit.params()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str =
        "[circuit]\ne_j_t = 12.0\ne_c_t = 0.2\ne_j_p = 2.7\ne_c_p = 0.15\ne_c_c = 0.025\n";

    #[test]
    fn parses_reference_circuit() {
        let c = JobConfig::parse(BASE).unwrap();
        let p = c.circuit.params().unwrap();
        assert_eq!(p, CircuitParams::reference());
    }

    #[test]
    fn unknown_key_reports_line() {
        let text = format!(
            "{BASE}[sweep]\naxis = \"flux\"\nstart = 0.0\nstop = 0.5\npoints = 3\nbogus = 1\n"
        );
        match JobConfig::parse(&text) {
            Err(Error::Config { line, message }) => {
                assert_eq!(line, 12, "{message}");
                assert!(message.contains("bogus"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn empty_grid_rejected() {
        let text = format!("{BASE}[sweep]\naxis = \"flux\"\nstart = 0.0\nstop = 0.5\npoints = 0\n");
        let c = JobConfig::parse(&text).unwrap();
        assert!(c.check_for(JobKind::Spectrum).is_err());
    }

    #[test]
    fn sections_must_match_job() {
        let text = format!("{BASE}[gate]\nkind = \"cz\"\n");
        let c = JobConfig::parse(&text).unwrap();
        assert!(c.check_for(JobKind::Gate).is_ok());
        assert!(c.check_for(JobKind::Spectrum).is_err());
        let c = JobConfig::parse(BASE).unwrap();
        assert!(c.check_for(JobKind::Gate).is_err());
    }

    #[test]
    fn grid_endpoints() {
        let s = SweepSection {
            axis: SweepAxisKind::Flux,
            start: 0.0,
            stop: 0.5,
            points: 11,
        };
        let g = s.grid().unwrap();
        assert_eq!(g.len(), 11);
        assert_eq!(g[10], 0.5);
    }
}
