//! Emission analysis of the dipole signal.
//!
//! Two views of the same signal:
//!
//! * [`dipole_spectrum`]: windowed DFT power `|D_x(w)|^2 + |D_y(w)|^2`.
//! * [`cwt`] / [`dipole_scalogram`]: Morlet wavelet transform
//!   `w(W, t) = sqrt(W) sum_j dt s(t_j) M*(W (t_j - t))` with the mother wavelet
//!   `M(x) = (e^{-ix} - e^{-s0^2/2}) e^{-x^2/(2 s0^2)}`.
//!
//! Emission lines are decided on the scalogram: power is integrated over an
//! energy band around each line and over the pulse plateau, then compared with
//! the strongest line of a reference run.

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::propagator::{TimeWindow, Trajectory};
use crate::ring::{ev_to_hartree, hartree_to_ev, level_energy_ev, RingConfig};

/// Time-frequency resolution of the mother wavelet.
pub const DEFAULT_SIGMA0: f64 = 6.0;

/// Wavelet support kept in the direct sum, `|x| <= 8 sigma0` (Gaussian at e^-32).
pub const SUPPORT_CUTOFF: f64 = 8.0;

/// Shortest DFT window, in optical cycles.
pub const MIN_SPECTRUM_WINDOW_OC: f64 = 8.0;

/// Presence threshold relative to the strongest reference line.
pub const DEFAULT_THRESHOLD: f64 = 3e-3;

/// Band half-width as a fraction of the photon energy (0.5 eV at 2 eV).
pub const DEFAULT_HALF_WIDTH_FRACTION: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Taper {
    Rectangular,
    #[default]
    Hann,
}

impl Taper {
    fn weight(self, j: usize, n: usize) -> f64 {
        match self {
            Taper::Rectangular => 1.0,
            Taper::Hann if n < 2 => 1.0,
            Taper::Hann => 0.5 - 0.5 * (2.0 * PI * j as f64 / (n - 1) as f64).cos(),
        }
    }
}

/// One-sided power spectrum of the dipole.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    /// Photon energies, eV.
    pub energies: Vec<f64>,
    pub power_x: Vec<f64>,
    pub power_y: Vec<f64>,
    /// `power_x + power_y`.
    pub power: Vec<f64>,
}

impl Spectrum {
    /// Energy of the strongest bin within `center +- half_width`, provided it
    /// is a strict local maximum of the full spectrum.
    pub fn peak_near(&self, center: f64, half_width: f64) -> Option<f64> {
        let idx: Vec<usize> = (0..self.energies.len())
            .filter(|&i| (self.energies[i] - center).abs() <= half_width)
            .collect();
        let &best = idx
            .iter()
            .max_by(|&&a, &&b| self.power[a].total_cmp(&self.power[b]))?;
        let n = self.power.len();
        let is_peak = best > 0
            && best + 1 < n
            && self.power[best] > self.power[best - 1]
            && self.power[best] > self.power[best + 1];
        is_peak.then(|| self.energies[best])
    }

    /// Energy of the largest bin above `min_energy`.
    pub fn dominant_energy(&self, min_energy: f64) -> Option<f64> {
        (0..self.energies.len())
            .filter(|&i| self.energies[i] >= min_energy)
            .max_by(|&a, &b| self.power[a].total_cmp(&self.power[b]))
            .map(|i| self.energies[i])
    }
}

/// One-sided `|sum_j w_j s_j e^{-i w t_j} dt|^2` for a real series sampled
/// every `dt` a.u. Returns `(energies_ev, power)`.
pub fn power_spectrum(signal: &[f64], dt: f64, taper: Taper) -> (Vec<f64>, Vec<f64>) {
    let n = signal.len();
    if n == 0 {
        return (Vec::new(), Vec::new());
    }
    let mut buf: Vec<Complex64> = signal
        .iter()
        .enumerate()
        .map(|(j, &s)| Complex64::new(s * taper.weight(j, n), 0.0))
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let bins = n / 2 + 1;
    let d_omega = 2.0 * PI / (n as f64 * dt);
    let energies = (0..bins).map(|k| hartree_to_ev(k as f64 * d_omega)).collect();
    let power = buf[..bins].iter().map(|c| c.norm_sqr() * dt * dt).collect();
    (energies, power)
}

/// DFT power of the dipole over `window`.
pub fn dipole_spectrum(traj: &Trajectory, window: TimeWindow, taper: Taper) -> Result<Spectrum> {
    let range = traj.indices_in(window);
    let span_oc = if range.len() < 2 {
        0.0
    } else {
        (traj.times[range.end - 1] - traj.times[range.start]) / traj.period
    };
    if span_oc < MIN_SPECTRUM_WINDOW_OC - 1e-9 {
        return Err(Error::WindowTooShort { span_oc, min_oc: MIN_SPECTRUM_WINDOW_OC });
    }
    let dx: Vec<f64> = traj.dipole[range.clone()].iter().map(|d| d[0]).collect();
    let dy: Vec<f64> = traj.dipole[range].iter().map(|d| d[1]).collect();
    let (energies, power_x) = power_spectrum(&dx, traj.dt_sample, taper);
    let (_, power_y) = power_spectrum(&dy, traj.dt_sample, taper);
    let power = power_x.iter().zip(&power_y).map(|(a, b)| a + b).collect();
    Ok(Spectrum { energies, power_x, power_y, power })
}

/// Morlet mother wavelet.
pub fn morlet(x: f64, sigma0: f64) -> Complex64 {
    let correction = (-0.5 * sigma0 * sigma0).exp();
    let gauss = (-x * x / (2.0 * sigma0 * sigma0)).exp();
    (Complex64::from_polar(1.0, -x) - correction) * gauss
}

/// Complex wavelet coefficients, row-major with one row per analysis energy.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexGrid {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Complex64>,
}

impl ComplexGrid {
    pub fn at(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.cols + col]
    }
}

/// Wavelet transform of a real series sampled every `dt` a.u., evaluated at
/// the sample indices `columns` for each analysis energy (eV).
pub fn cwt(
    signal: &[f64],
    dt: f64,
    energies_ev: &[f64],
    sigma0: f64,
    columns: &[usize],
) -> Result<ComplexGrid> {
    if !(sigma0 > 0.0) {
        return Err(Error::InvalidSpectral(format!("sigma0 must be > 0, got {sigma0}")));
    }
    if let Some(e) = energies_ev.iter().find(|&&e| !(e > 0.0)) {
        return Err(Error::InvalidSpectral(format!("analysis energy must be > 0, got {e}")));
    }
    if let Some(&c) = columns.iter().find(|&&c| c >= signal.len()) {
        return Err(Error::InvalidSpectral(format!("column {c} beyond signal of {}", signal.len())));
    }
    let n = signal.len() as i64;
    let rows: Vec<Vec<Complex64>> = energies_ev
        .par_iter()
        .map(|&e| {
            let omega = ev_to_hartree(e);
            let half = (SUPPORT_CUTOFF * sigma0 / (omega * dt)).floor() as i64;
            let half = half.min(n);
            let kernel: Vec<Complex64> = (-half..=half)
                .map(|d| morlet(omega * d as f64 * dt, sigma0).conj())
                .collect();
            let scale = omega.sqrt() * dt;
            columns
                .iter()
                .map(|&c| {
                    let c = c as i64;
                    let lo = (c - half).max(0);
                    let hi = (c + half).min(n - 1);
                    let mut acc = Complex64::new(0.0, 0.0);
                    for j in lo..=hi {
                        acc += kernel[(j - c + half) as usize] * signal[j as usize];
                    }
                    acc * scale
                })
                .collect()
        })
        .collect();
    Ok(ComplexGrid {
        rows: energies_ev.len(),
        cols: columns.len(),
        data: rows.into_iter().flatten().collect(),
    })
}

/// Evenly spaced analysis energies in eV from `min` up to at most `max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyGrid {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl EnergyGrid {
    /// 0.125 to 6 photon energies in steps of 0.01 (588 rows).
    pub fn for_photon_energy(photon_energy: f64) -> Self {
        Self { min: 0.125 * photon_energy, max: 6.0 * photon_energy, step: 0.01 * photon_energy }
    }

    pub fn values(&self) -> Vec<f64> {
        if !(self.step > 0.0) || self.max < self.min {
            return Vec::new();
        }
        let n = ((self.max - self.min) / self.step + 1e-9).floor() as usize + 1;
        (0..n).map(|i| self.min + i as f64 * self.step).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalogramConfig {
    pub sigma0: f64,
    pub energies: EnergyGrid,
    /// Evaluate every `time_stride`-th sample.
    pub time_stride: usize,
}

impl ScalogramConfig {
    pub fn for_photon_energy(photon_energy: f64) -> Self {
        Self {
            sigma0: DEFAULT_SIGMA0,
            energies: EnergyGrid::for_photon_energy(photon_energy),
            time_stride: 4,
        }
    }
}

/// `|w(W, t)|` on an energy x time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Scalogram {
    /// Analysis energies, eV (rows).
    pub energies: Vec<f64>,
    /// Column times in optical cycles.
    pub times_oc: Vec<f64>,
    /// Row-major magnitudes.
    pub magnitude: Vec<f64>,
    pub sigma0: f64,
    /// Time span used for band integration, optical cycles.
    pub plateau_oc: [f64; 2],
}

impl Scalogram {
    pub fn rows(&self) -> usize {
        self.energies.len()
    }

    pub fn cols(&self) -> usize {
        self.times_oc.len()
    }

    pub fn at(&self, row: usize, col: usize) -> f64 {
        self.magnitude[row * self.cols() + col]
    }

    fn plateau_columns(&self) -> Vec<usize> {
        let eps = 1e-9;
        (0..self.cols())
            .filter(|&c| {
                self.times_oc[c] >= self.plateau_oc[0] - eps && self.times_oc[c] <= self.plateau_oc[1] + eps
            })
            .collect()
    }

    /// Time average of `|w|^2` over the plateau, one value per energy row.
    pub fn mean_power_profile(&self) -> Vec<f64> {
        let cols = self.plateau_columns();
        let n = cols.len().max(1) as f64;
        (0..self.rows())
            .map(|r| cols.iter().map(|&c| self.at(r, c).powi(2)).sum::<f64>() / n)
            .collect()
    }

    /// Energy of the strongest strict local maximum of the time-averaged
    /// profile within `[lo, hi]` eV.
    pub fn ridge_between(&self, lo: f64, hi: f64) -> Option<f64> {
        let p = self.mean_power_profile();
        (1..self.rows().saturating_sub(1))
            .filter(|&r| self.energies[r] >= lo && self.energies[r] <= hi)
            .filter(|&r| p[r] > p[r - 1] && p[r] > p[r + 1])
            .max_by(|&a, &b| p[a].total_cmp(&p[b]))
            .map(|r| self.energies[r])
    }
}

/// Scalogram of `sqrt(|w_x|^2 + |w_y|^2)` for the dipole samples inside
/// `segment`, integrating over `plateau` when lines are detected.
pub fn dipole_scalogram(
    traj: &Trajectory,
    segment: TimeWindow,
    plateau: TimeWindow,
    config: &ScalogramConfig,
) -> Result<Scalogram> {
    if config.time_stride == 0 {
        return Err(Error::InvalidSpectral("time_stride must be >= 1".into()));
    }
    let range = traj.indices_in(segment);
    if range.len() < 2 {
        return Err(Error::EmptyWindow { start: segment.start, end: segment.end });
    }
    let dx: Vec<f64> = traj.dipole[range.clone()].iter().map(|d| d[0]).collect();
    let dy: Vec<f64> = traj.dipole[range.clone()].iter().map(|d| d[1]).collect();
    let columns: Vec<usize> = (0..dx.len()).step_by(config.time_stride).collect();
    let energies = config.energies.values();
    let wx = cwt(&dx, traj.dt_sample, &energies, config.sigma0, &columns)?;
    let wy = cwt(&dy, traj.dt_sample, &energies, config.sigma0, &columns)?;
    let magnitude = wx
        .data
        .iter()
        .zip(&wy.data)
        .map(|(a, b)| (a.norm_sqr() + b.norm_sqr()).sqrt())
        .collect();
    let times_oc = columns.iter().map(|&c| traj.time_oc(range.start + c)).collect();
    Ok(Scalogram {
        energies,
        times_oc,
        magnitude,
        sigma0: config.sigma0,
        plateau_oc: [plateau.start / traj.period, plateau.end / traj.period],
    })
}

/// The four emission lines read as logic outputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Line {
    /// First odd harmonic.
    #[serde(rename = "H_I")]
    HI,
    /// Third harmonic.
    #[serde(rename = "H_II")]
    HII,
    /// Raman line near twice the first level energy.
    #[serde(rename = "H_R1")]
    HR1,
    /// Raman lines between the second level and the sum of the first two.
    #[serde(rename = "H_R2")]
    HR2,
}

impl Line {
    pub const ALL: [Line; 4] = [Line::HI, Line::HII, Line::HR1, Line::HR2];

    pub fn name(self) -> &'static str {
        match self {
            Line::HI => "H_I",
            Line::HII => "H_II",
            Line::HR1 => "H_R1",
            Line::HR2 => "H_R2",
        }
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Closed energy interval in eV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub lo: f64,
    pub hi: f64,
}

impl Band {
    pub fn contains(&self, e: f64) -> bool {
        e >= self.lo && e <= self.hi
    }

    pub fn overlaps(&self, other: &Band) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineBand {
    pub line: Line,
    pub center: f64,
    pub band: Band,
}

/// Where each requested line is looked for.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandPlan {
    pub bands: Vec<LineBand>,
}

impl BandPlan {
    pub fn new(ring: &RingConfig, photon_energy: f64, half_width: f64, lines: &[Line]) -> Result<Self> {
        if !(half_width > 0.0) {
            return Err(Error::InvalidSpectral(format!("band half-width must be > 0, got {half_width}")));
        }
        let e1 = level_energy_ev(1, ring);
        let e2 = 4.0 * e1;
        let bands: Vec<LineBand> = lines
            .iter()
            .map(|&line| {
                let (lo, hi) = match line {
                    Line::HI => (photon_energy, photon_energy),
                    Line::HII => (3.0 * photon_energy, 3.0 * photon_energy),
                    Line::HR1 => (2.0 * e1, 2.0 * e1),
                    Line::HR2 => (e2, e2 + e1),
                };
                LineBand {
                    line,
                    center: 0.5 * (lo + hi),
                    band: Band { lo: lo - half_width, hi: hi + half_width },
                }
            })
            .collect();
        for (i, a) in bands.iter().enumerate() {
            for b in &bands[i + 1..] {
                if a.band.overlaps(&b.band) {
                    return Err(Error::BandOverlap { first: a.line, second: b.line });
                }
            }
        }
        Ok(Self { bands })
    }

    pub fn standard(ring: &RingConfig, photon_energy: f64, half_width: f64) -> Result<Self> {
        Self::new(ring, photon_energy, half_width, &Line::ALL)
    }
}

/// Band power integrated over energy (eV) and plateau time (oc).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinePowers {
    pub entries: Vec<(LineBand, f64)>,
}

impl LinePowers {
    pub fn max(&self) -> f64 {
        self.entries.iter().map(|e| e.1).fold(0.0, f64::max)
    }

    pub fn power(&self, line: Line) -> Option<f64> {
        self.entries.iter().find(|e| e.0.line == line).map(|e| e.1)
    }

    /// `present = power > threshold * reference`.
    pub fn classify(&self, threshold: f64, reference: f64) -> LineReport {
        LineReport {
            lines: self
                .entries
                .iter()
                .map(|(lb, p)| LineResult {
                    line: lb.line,
                    center: lb.center,
                    band: lb.band,
                    power: *p,
                    present: *p > threshold * reference,
                })
                .collect(),
            threshold,
            reference,
        }
    }
}

pub fn measure_lines(scalogram: &Scalogram, plan: &BandPlan) -> Result<LinePowers> {
    let cols = scalogram.plateau_columns();
    if cols.is_empty() {
        return Err(Error::EmptyWindow { start: scalogram.plateau_oc[0], end: scalogram.plateau_oc[1] });
    }
    let de = if scalogram.rows() > 1 { scalogram.energies[1] - scalogram.energies[0] } else { 1.0 };
    let dt = if scalogram.cols() > 1 { scalogram.times_oc[1] - scalogram.times_oc[0] } else { 1.0 };
    let mut entries = Vec::with_capacity(plan.bands.len());
    for lb in &plan.bands {
        let rows: Vec<usize> =
            (0..scalogram.rows()).filter(|&r| lb.band.contains(scalogram.energies[r])).collect();
        if rows.is_empty() {
            return Err(Error::InvalidSpectral(format!(
                "band [{:.4}, {:.4}] eV of {} lies outside the analysis grid",
                lb.band.lo, lb.band.hi, lb.line
            )));
        }
        let power: f64 = rows
            .iter()
            .map(|&r| cols.iter().map(|&c| scalogram.at(r, c).powi(2)).sum::<f64>())
            .sum();
        entries.push((*lb, power * de * dt));
    }
    Ok(LinePowers { entries })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineResult {
    pub line: Line,
    pub center: f64,
    pub band: Band,
    pub power: f64,
    pub present: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineReport {
    pub lines: Vec<LineResult>,
    pub threshold: f64,
    pub reference: f64,
}

impl LineReport {
    pub fn get(&self, line: Line) -> Option<&LineResult> {
        self.lines.iter().find(|l| l.line == line)
    }

    /// False for lines that were not measured.
    pub fn present(&self, line: Line) -> bool {
        self.get(line).is_some_and(|l| l.present)
    }
}

/// Default band half-width for a photon energy.
pub fn default_half_width(photon_energy: f64) -> f64 {
    DEFAULT_HALF_WIDTH_FRACTION * photon_energy
}

/// Detects the four lines of one run, using its own strongest line as the
/// reference.
pub fn detect_lines(
    scalogram: &Scalogram,
    ring: &RingConfig,
    photon_energy: f64,
    threshold: f64,
) -> Result<LineReport> {
    let plan = BandPlan::standard(ring, photon_energy, default_half_width(photon_energy))?;
    let powers = measure_lines(scalogram, &plan)?;
    Ok(powers.classify(threshold, powers.max()))
}
