//! Laser polarization as boolean input, emission lines and angular momentum as
//! boolean output.

pub mod circuits;
pub mod gates;
pub mod memory;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::Result;
use crate::observables::time_avg_lz;
use crate::propagator::{prepare_pump, propagate, Numerics, Trajectory};
use crate::ring::{Helicity, LaserPulse, PulseSchedule, RingConfig, WaveFunction};
use crate::spectral::{
    default_half_width, dipole_scalogram, measure_lines, BandPlan, Line, LinePowers, LineReport,
    ScalogramConfig, DEFAULT_THRESHOLD,
};

pub use circuits::{full_adder, half_adder, toffoli, CircuitTrace, GateLibrary, GatePrimitive, TraceStep};
pub use gates::{classify_column, column_index, GateKind};
pub use memory::{memory_write, MemoryArray, MemoryCell};

/// Default `|L_z|` above which the angular-momentum output reads 1, in hbar.
pub const DEFAULT_LZ_THRESHOLD: f64 = 0.01;

/// The pair `(E_x, E_y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InputState {
    pub ex: bool,
    pub ey: bool,
}

impl InputState {
    /// Truth-table row order.
    pub const ALL: [InputState; 4] = [
        InputState { ex: false, ey: false },
        InputState { ex: true, ey: false },
        InputState { ex: false, ey: true },
        InputState { ex: true, ey: true },
    ];

    pub fn new(ex: bool, ey: bool) -> Self {
        Self { ex, ey }
    }

    /// Polarization angle in degrees, `None` when the laser is off.
    pub fn beta(self) -> Option<f64> {
        match (self.ex, self.ey) {
            (false, false) => None,
            (true, false) => Some(0.0),
            (false, true) => Some(90.0),
            (true, true) => Some(45.0),
        }
    }

    pub fn index(self) -> usize {
        column_index(self.ex, self.ey)
    }

    pub fn label(self) -> String {
        format!("{}{}", self.ex as u8, self.ey as u8)
    }
}

impl fmt::Display for InputState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.ex as u8, self.ey as u8)
    }
}

/// Pulse parameters shared by all inputs of a truth table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaserParams {
    /// W/cm^2.
    pub intensity: f64,
    /// eV.
    pub photon_energy: f64,
    pub duration_oc: f64,
    pub ramp_oc: f64,
}

impl Default for LaserParams {
    fn default() -> Self {
        Self { intensity: 1e14, photon_energy: 2.0, duration_oc: 32.0, ramp_oc: 2.0 }
    }
}

impl LaserParams {
    pub fn pulse(&self, beta: f64) -> Result<LaserPulse> {
        LaserPulse::new(self.intensity, self.photon_energy, beta, self.duration_oc, self.ramp_oc)
    }
}

pub fn encode_input(input: InputState, params: &LaserParams) -> Result<PulseSchedule> {
    let pulse = match input.beta() {
        Some(beta) => params.pulse(beta)?,
        None => LaserPulse::off(params.photon_energy, params.duration_oc, params.ramp_oc)?,
    };
    Ok(PulseSchedule::single(pulse))
}

/// Angular-momentum state prepared before the probe pulse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pump {
    None,
    Positive,
    Negative,
}

impl Pump {
    pub const ALL: [Pump; 3] = [Pump::None, Pump::Positive, Pump::Negative];

    pub fn name(self) -> &'static str {
        match self {
            Pump::None => "none",
            Pump::Positive => "positive",
            Pump::Negative => "negative",
        }
    }

    pub fn helicity(self) -> Option<Helicity> {
        match self {
            Pump::None => None,
            Pump::Positive => Some(Helicity::Positive),
            Pump::Negative => Some(Helicity::Negative),
        }
    }
}

impl fmt::Display for Pump {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Output columns of a truth table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Output {
    #[serde(rename = "H_I")]
    HI,
    #[serde(rename = "H_II")]
    HII,
    #[serde(rename = "H_R1")]
    HR1,
    #[serde(rename = "H_R2")]
    HR2,
    #[serde(rename = "L_z")]
    Lz,
}

impl Output {
    pub const ALL: [Output; 5] = [Output::HI, Output::HII, Output::HR1, Output::HR2, Output::Lz];

    pub fn name(self) -> &'static str {
        match self {
            Output::HI => "H_I",
            Output::HII => "H_II",
            Output::HR1 => "H_R1",
            Output::HR2 => "H_R2",
            Output::Lz => "L_z",
        }
    }

    pub fn line(self) -> Option<Line> {
        match self {
            Output::HI => Some(Line::HI),
            Output::HII => Some(Line::HII),
            Output::HR1 => Some(Line::HR1),
            Output::HR2 => Some(Line::HR2),
            Output::Lz => None,
        }
    }
}

impl fmt::Display for Output {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One truth-table row, in `Output::ALL` order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputBits {
    pub bits: [bool; 5],
    /// Sign of the final `L_z`: -1, 0 or 1.
    pub lz_sign: i8,
}

impl OutputBits {
    pub fn get(&self, output: Output) -> bool {
        self.bits[Output::ALL.iter().position(|&o| o == output).unwrap()]
    }
}

pub fn booleanize(report: &LineReport, final_lz: f64, lz_threshold: f64) -> OutputBits {
    let line_bit = |line| report.present(line);
    let lz_sign = if final_lz > 0.0 {
        1
    } else if final_lz < 0.0 {
        -1
    } else {
        0
    };
    OutputBits {
        bits: [
            line_bit(Line::HI),
            line_bit(Line::HII),
            line_bit(Line::HR1),
            line_bit(Line::HR2),
            final_lz.abs() > lz_threshold,
        ],
        lz_sign,
    }
}

/// How a probe run is turned into bits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisSettings {
    pub scalogram: ScalogramConfig,
    /// Relative line threshold.
    pub threshold: f64,
    /// Band half-width, eV.
    pub half_width: f64,
    pub lz_threshold: f64,
    /// Lines that get a band; the others read 0.
    pub lines: Vec<Line>,
}

impl AnalysisSettings {
    pub fn for_photon_energy(photon_energy: f64) -> Self {
        Self {
            scalogram: ScalogramConfig::for_photon_energy(photon_energy),
            threshold: DEFAULT_THRESHOLD,
            half_width: default_half_width(photon_energy),
            lz_threshold: DEFAULT_LZ_THRESHOLD,
            lines: Line::ALL.to_vec(),
        }
    }

    pub fn band_plan(&self, ring: &RingConfig, photon_energy: f64) -> Result<BandPlan> {
        BandPlan::new(ring, photon_energy, self.half_width, &self.lines)
    }
}

/// Everything needed to assemble a truth table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Experiment {
    pub ring: RingConfig,
    pub laser: LaserParams,
    pub numerics: Numerics,
    pub analysis: AnalysisSettings,
}

impl Experiment {
    pub fn new(ring: RingConfig, laser: LaserParams) -> Self {
        Self {
            ring,
            laser,
            numerics: Numerics::default(),
            analysis: AnalysisSettings::for_photon_energy(laser.photon_energy),
        }
    }

    /// The state the probes start from.
    pub fn initial_state(&self, pump: Pump) -> Result<WaveFunction> {
        match pump.helicity() {
            None => Ok(WaveFunction::ground(&self.ring)),
            Some(h) => prepare_pump(
                &self.ring,
                self.laser.intensity,
                self.laser.photon_energy,
                h,
                self.laser.duration_oc,
                &self.numerics,
            ),
        }
    }
}

/// A probe run before thresholding.
#[derive(Debug, Clone)]
pub struct ProbeRun {
    pub input: InputState,
    pub trajectory: Trajectory,
    pub powers: LinePowers,
    pub final_lz: f64,
    /// Plateau average of `L_z`.
    pub mean_lz: f64,
}

/// Propagates `initial` through the pulse for `input` and measures its lines
/// over the plateau of that pulse.
pub fn run_input(exp: &Experiment, initial: &WaveFunction, input: InputState) -> Result<ProbeRun> {
    let schedule = encode_input(input, &exp.laser)?;
    let plan = exp.analysis.band_plan(&exp.ring, exp.laser.photon_energy)?;
    let trajectory = propagate(initial, &schedule, &exp.ring, &exp.numerics)?;
    let seg = *trajectory.last_segment();
    let plateau = seg.plateau(trajectory.period);
    let scalogram = dipole_scalogram(&trajectory, seg.window(), plateau, &exp.analysis.scalogram)?;
    let powers = measure_lines(&scalogram, &plan)?;
    let mean_lz = time_avg_lz(&trajectory, plateau)?;
    Ok(ProbeRun { input, final_lz: trajectory.final_lz(), trajectory, powers, mean_lz })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthRow {
    pub input: InputState,
    pub outputs: OutputBits,
    pub final_lz: f64,
    pub mean_lz: f64,
    pub lines: LineReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthTable {
    pub context: Pump,
    pub rows: Vec<TruthRow>,
    /// Strongest band power over all rows; line thresholds are relative to it.
    pub reference: f64,
    pub threshold: f64,
    pub lz_threshold: f64,
}

impl TruthTable {
    /// Thresholds a family of probe runs against their common strongest line.
    pub fn from_runs(context: Pump, runs: &[ProbeRun], threshold: f64, lz_threshold: f64) -> Self {
        let reference = runs.iter().map(|r| r.powers.max()).fold(0.0, f64::max);
        let rows = runs
            .iter()
            .map(|r| {
                let lines = r.powers.classify(threshold, reference);
                TruthRow {
                    input: r.input,
                    outputs: booleanize(&lines, r.final_lz, lz_threshold),
                    final_lz: r.final_lz,
                    mean_lz: r.mean_lz,
                    lines,
                }
            })
            .collect();
        Self { context, rows, reference, threshold, lz_threshold }
    }

    pub fn row(&self, input: InputState) -> Option<&TruthRow> {
        self.rows.iter().find(|r| r.input == input)
    }

    /// Output column ordered `00, 10, 01, 11`. Missing rows read 0.
    pub fn column(&self, output: Output) -> [bool; 4] {
        InputState::ALL.map(|i| self.row(i).is_some_and(|r| r.outputs.get(output)))
    }

    pub fn classifications(&self) -> Vec<(Output, GateKind)> {
        Output::ALL.iter().map(|&o| (o, classify_column(self.column(o)))).collect()
    }
}

/// Runs the four inputs from the state left by `pump`.
pub fn truth_table(exp: &Experiment, pump: Pump) -> Result<TruthTable> {
    let initial = exp.initial_state(pump)?;
    let runs = InputState::ALL
        .par_iter()
        .map(|&input| run_input(exp, &initial, input))
        .collect::<Result<Vec<_>>>()?;
    Ok(TruthTable::from_runs(pump, &runs, exp.analysis.threshold, exp.analysis.lz_threshold))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{Band, LineBand, LineResult};

    #[test]
    fn input_mapping() {
        let params = LaserParams::default();
        let betas: Vec<Option<f64>> = InputState::ALL.iter().map(|i| i.beta()).collect();
        assert_eq!(betas, vec![None, Some(0.0), Some(90.0), Some(45.0)]);
        for (k, i) in InputState::ALL.iter().enumerate() {
            assert_eq!(i.index(), k);
        }
        let off = encode_input(InputState::new(false, false), &params).unwrap();
        assert!(off.segments()[0].is_off());
        assert_eq!(off.duration_oc(), params.duration_oc);
        let on = encode_input(InputState::new(false, true), &params).unwrap();
        assert_eq!(on.segments()[0].beta, 90.0);
        assert_eq!(on.segments()[0].intensity, 1e14);
    }

    fn report(present: [bool; 4]) -> LineReport {
        LineReport {
            lines: Line::ALL
                .iter()
                .zip(present)
                .map(|(&line, p)| LineResult {
                    line,
                    center: 1.0,
                    band: Band { lo: 0.5, hi: 1.5 },
                    power: p as u8 as f64,
                    present: p,
                })
                .collect(),
            threshold: 0.5,
            reference: 1.0,
        }
    }

    #[test]
    fn booleanize_copies_lines_and_thresholds_lz() {
        let b = booleanize(&report([true, false, true, false]), 0.03, 0.01);
        assert_eq!(b.bits, [true, false, true, false, true]);
        assert_eq!(b.lz_sign, 1);
        let b = booleanize(&report([false; 4]), 0.0, 0.01);
        assert_eq!(b.bits, [false; 5]);
        assert_eq!(b.lz_sign, 0);
        let b = booleanize(&report([false; 4]), -0.5, 0.01);
        assert!(b.get(Output::Lz));
        assert_eq!(b.lz_sign, -1);
        let b = booleanize(&report([false; 4]), 0.005, 0.01);
        assert!(!b.get(Output::Lz));
    }

    #[test]
    fn unmeasured_lines_read_zero() {
        let partial = LineReport { lines: report([true; 4]).lines[..2].to_vec(), threshold: 0.5, reference: 1.0 };
        let b = booleanize(&partial, 0.0, 0.01);
        assert_eq!(b.bits, [true, true, false, false, false]);
    }

    #[test]
    fn table_uses_family_reference() {
        let lb = |line| LineBand { line, center: 1.0, band: Band { lo: 0.5, hi: 1.5 } };
        let empty_traj = |input| {
            let ring = RingConfig::new(2.7, 4).unwrap();
            let off = PulseSchedule::single(LaserPulse::off(2.0, 8.0, 2.0).unwrap());
            let numerics = Numerics { steps_per_oc: 256, samples_per_oc: 4, ..Numerics::default() };
            let traj = propagate(&WaveFunction::ground(&ring), &off, &ring, &numerics).unwrap();
            (input, traj)
        };
        let runs: Vec<ProbeRun> = [(100.0, 0.0), (1.0, 0.5), (0.2, -0.5), (0.0, 0.0)]
            .iter()
            .zip(InputState::ALL)
            .map(|(&(p, lz), input)| {
                let (input, trajectory) = empty_traj(input);
                ProbeRun {
                    input,
                    trajectory,
                    powers: LinePowers { entries: Line::ALL.iter().map(|&l| (lb(l), p)).collect() },
                    final_lz: lz,
                    mean_lz: lz,
                }
            })
            .collect();
        let t = TruthTable::from_runs(Pump::None, &runs, 5e-3, 0.1);
        assert_eq!(t.reference, 100.0);
        assert_eq!(t.column(Output::HI), [true, true, false, false]);
        assert_eq!(t.column(Output::Lz), [false, true, true, false]);
        assert_eq!(t.classifications()[4], (Output::Lz, GateKind::Xor));
    }
}
