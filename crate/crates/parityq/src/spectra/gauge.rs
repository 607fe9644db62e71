//! State tracking and smooth gauge along parameter sweeps.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{element, ppq_spectrum, transmon_spectrum, Parity, Spectrum};
use crate::circuit_ops::{cos_phi, number_operator, sin_phi, ChargeBasis, CircuitParams};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;

/// Smallest tolerated overlap between consecutive points.
pub const MIN_OVERLAP: f64 = 0.1;

#[derive(Clone, Debug, PartialEq)]
pub struct SweepAxis {
    pub name: String,
    pub values: Vec<f64>,
}

impl SweepAxis {
    pub fn new(name: &str, values: Vec<f64>) -> Self {
        Self {
            name: name.to_string(),
            values,
        }
    }

    /// `points` evenly spaced values from `start` to `stop` inclusive.
    pub fn linspace(name: &str, start: f64, stop: f64, points: usize) -> Self {
        let values = match points {
            0 => vec![],
            1 => vec![start],
            _ => (0..points)
                .map(|i| start + (stop - start) * i as f64 / (points - 1) as f64)
                .collect(),
        };
        Self::new(name, values)
    }
}

/// Gauge-smoothed sweep. Spectra are in tracking order: column `i` at every
/// point is the continuation of column `i` at the first point, so
/// eigenvalues are not necessarily ascending after a crossing.
#[derive(Clone, Debug)]
pub struct SweepResult {
    pub axis: SweepAxis,
    pub spectra: Vec<Spectrum>,
    /// Consecutive overlaps `⟨ψ_{j−1,i}|ψ_{j,i}⟩` after fixing, per state.
    pub overlaps: Vec<Vec<Complex64>>,
    pub channels: BTreeMap<String, Vec<f64>>,
}

fn compatible(a: Option<Parity>, b: Option<Parity>) -> bool {
    match (a, b) {
        (Some(Parity::Mixed), _) | (_, Some(Parity::Mixed)) => true,
        (Some(x), Some(y)) => x == y,
        _ => true,
    }
}

/// Track states by maximal overlap within each parity sector and rephase
/// each point so consecutive overlaps are real-positive. The first point's
/// gauge is kept as the anchor.
pub fn smooth_gauge_fix(axis: SweepAxis, raw: Vec<Spectrum>) -> Result<SweepResult> {
    if raw.len() != axis.values.len() {
        return Err(Error::InvalidArgument(format!(
            "{} spectra for {} grid points",
            raw.len(),
            axis.values.len()
        )));
    }
    if raw.is_empty() {
        return Err(Error::InvalidArgument("empty sweep".into()));
    }
    let k = raw[0].len();
    if raw.iter().any(|s| s.len() != k) {
        return Err(Error::InvalidArgument(
            "state count differs between points".into(),
        ));
    }
    let mut out: Vec<Spectrum> = Vec::with_capacity(raw.len());
    let mut overlaps = vec![vec![Complex64::new(1.0, 0.0); k]];
    let mut iter = raw.into_iter();
    out.push(iter.next().expect("nonempty"));
    for (j, cur) in iter.enumerate() {
        let prev = out.last().expect("nonempty");
        let ov: CMatrix = prev.eigenvectors.adjoint() * &cur.eigenvectors;
        let parity_of = |s: &Spectrum, i: usize| s.parity.as_ref().map(|p| p[i]);
        let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
        for a in 0..k {
            for b in 0..k {
                if compatible(parity_of(prev, a), parity_of(&cur, b)) {
                    pairs.push((ov[(a, b)].norm(), a, b));
                }
            }
        }
        pairs.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
        let mut assign: Vec<Option<usize>> = vec![None; k];
        let mut used = vec![false; k];
        for (_, a, b) in pairs {
            if assign[a].is_none() && !used[b] {
                assign[a] = Some(b);
                used[b] = true;
            }
        }
        let mut vecs = CMatrix::zeros(cur.eigenvectors.nrows(), k);
        let mut values = vec![0.0; k];
        let mut parity = cur.parity.as_ref().map(|_| vec![Parity::Mixed; k]);
        let mut point_overlaps = Vec::with_capacity(k);
        for a in 0..k {
            let b = assign[a].ok_or(Error::GridTooCoarse {
                index: j + 1,
                overlap: 0.0,
            })?;
            let o = ov[(a, b)];
            if o.norm() < MIN_OVERLAP {
                return Err(Error::GridTooCoarse {
                    index: j + 1,
                    overlap: o.norm(),
                });
            }
            let phase = Complex64::from_polar(1.0, -o.arg());
            vecs.set_column(a, &(cur.eigenvectors.column(b) * phase));
            values[a] = cur.eigenvalues[b];
            if let (Some(p), Some(src)) = (parity.as_mut(), cur.parity.as_ref()) {
                p[a] = src[b];
            }
            point_overlaps.push(o * phase);
        }
        overlaps.push(point_overlaps);
        out.push(Spectrum {
            eigenvalues: values,
            eigenvectors: vecs,
            parity,
            gauge_fixed: true,
        });
    }
    Ok(SweepResult {
        axis,
        spectra: out,
        overlaps,
        channels: BTreeMap::new(),
    })
}

fn energy_channels(res: &mut SweepResult) {
    let k = res.spectra[0].len();
    for i in 0..k {
        let ch = res.spectra.iter().map(|s| s.eigenvalues[i]).collect();
        res.channels.insert(format!("E{i}"), ch);
    }
}

/// Transmon states versus its offset charge. Channel `n01_im` holds
/// `Im⟨0_t|n|1_t⟩`.
pub fn transmon_n_g_sweep(
    params: &CircuitParams,
    basis: &ChargeBasis,
    values: &[f64],
    k: usize,
) -> Result<SweepResult> {
    let raw: Vec<Spectrum> = values
        .par_iter()
        .map(|&ng| transmon_spectrum(&params.with_n_g_t(ng), basis, params.flux, k))
        .collect::<Result<_>>()?;
    let mut res = smooth_gauge_fix(SweepAxis::new("n_g_t", values.to_vec()), raw)?;
    energy_channels(&mut res);
    transmon_element_channels(&mut res, basis);
    Ok(res)
}

/// Transmon states versus flux.
pub fn transmon_flux_sweep(
    params: &CircuitParams,
    basis: &ChargeBasis,
    values: &[f64],
    k: usize,
) -> Result<SweepResult> {
    let raw: Vec<Spectrum> = values
        .par_iter()
        .map(|&f| transmon_spectrum(params, basis, f, k))
        .collect::<Result<_>>()?;
    let mut res = smooth_gauge_fix(SweepAxis::new("flux", values.to_vec()), raw)?;
    energy_channels(&mut res);
    transmon_element_channels(&mut res, basis);
    Ok(res)
}

fn transmon_element_channels(res: &mut SweepResult, basis: &ChargeBasis) {
    if res.spectra[0].len() < 2 {
        return;
    }
    let n = number_operator(basis, 0.0).matrix;
    let ch = res
        .spectra
        .iter()
        .map(|s| element(s, &n, 0, 1).im)
        .collect();
    res.channels.insert("n01_im".into(), ch);
}

/// PPQ states versus its offset charge, tracked by parity. Channels:
/// `n21_im`, `n30_im` (charge elements), `dh_x = Re⟨0_p|H^x|1_p⟩`,
/// `dh_y = Im⟨0_p|H^y|1_p⟩` using the error amplitudes in `params`.
pub fn ppq_n_g_sweep(
    params: &CircuitParams,
    basis: &ChargeBasis,
    values: &[f64],
    k: usize,
) -> Result<SweepResult> {
    let raw: Vec<Spectrum> = values
        .par_iter()
        .map(|&ng| ppq_spectrum(&params.with_n_g_p(ng), basis, k))
        .collect::<Result<_>>()?;
    let mut res = smooth_gauge_fix(SweepAxis::new("n_g_p", values.to_vec()), raw)?;
    energy_channels(&mut res);
    let n = number_operator(basis, 0.0).matrix;
    let cs = cos_phi(basis, 1)?.matrix;
    let sn = sin_phi(basis, 1)?.matrix;
    if k >= 2 {
        let dh_x = res
            .spectra
            .iter()
            .map(|s| -params.eps_x * element(s, &cs, 0, 1).re)
            .collect();
        let dh_y = res
            .spectra
            .iter()
            .map(|s| -params.eps_y * element(s, &sn, 0, 1).im)
            .collect();
        res.channels.insert("dh_x".into(), dh_x);
        res.channels.insert("dh_y".into(), dh_y);
    }
    if k >= 4 {
        let a = res
            .spectra
            .iter()
            .map(|s| element(s, &n, 2, 1).im)
            .collect();
        let b = res
            .spectra
            .iter()
            .map(|s| element(s, &n, 3, 0).im)
            .collect();
        res.channels.insert("n21_im".into(), a);
        res.channels.insert("n30_im".into(), b);
    }
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit_ops::DEFAULT_CUTOFF;

    #[test]
    fn single_point_is_anchor_only() {
        let p = CircuitParams::reference();
        let b = ChargeBasis::transmon(DEFAULT_CUTOFF).unwrap();
        let s = transmon_spectrum(&p, &b, 0.0, 3).unwrap();
        let res = smooth_gauge_fix(SweepAxis::new("flux", vec![0.0]), vec![s.clone()]).unwrap();
        assert_eq!(res.spectra[0].eigenvectors, s.eigenvectors);
    }

    #[test]
    fn transmon_charge_sweep_is_real_positive() {
        let p = CircuitParams::reference();
        let b = ChargeBasis::transmon(DEFAULT_CUTOFF).unwrap();
        let grid = SweepAxis::linspace("n_g_t", 0.0, 1.0, 101).values;
        let res = transmon_n_g_sweep(&p, &b, &grid, 3).unwrap();
        for row in &res.overlaps {
            for o in row {
                assert!(o.im.abs() < 1e-8 && o.re > 0.0);
            }
        }
    }

    #[test]
    fn ppq_sweep_tracks_parity_through_crossing() {
        let p = CircuitParams::from_ghz(10.0, 0.25, 3.0, 0.25, 0.0);
        let b = ChargeBasis::ppq(DEFAULT_CUTOFF).unwrap();
        let grid = SweepAxis::linspace("n_g_p", 0.0, 2.0, 201).values;
        let res = ppq_n_g_sweep(&p, &b, &grid, 2).unwrap();
        for s in &res.spectra {
            assert_eq!(s.parity.clone().unwrap(), vec![Parity::Even, Parity::Odd]);
        }
        // tracked state 0 is the ground state below n_g = 0.5 and excited above
        let e = &res.channels["E0"];
        let f = &res.channels["E1"];
        assert!(e[20] < f[20] && e[80] > f[80]);
    }

    #[test]
    fn mismatched_lengths_rejected() {
        assert!(smooth_gauge_fix(SweepAxis::new("x", vec![0.0, 1.0]), vec![]).is_err());
    }

    #[test]
    fn linspace_edges() {
        assert!(SweepAxis::linspace("x", 0.0, 1.0, 0).values.is_empty());
        assert_eq!(SweepAxis::linspace("x", 0.3, 1.0, 1).values, vec![0.3]);
        let v = SweepAxis::linspace("x", 0.0, 0.5, 51).values;
        assert_eq!(v.len(), 51);
        assert!((v[50] - 0.5).abs() < 1e-15);
    }
}
