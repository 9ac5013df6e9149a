//! Subcommands of the `nanoring` binary, callable as functions.
//!
//! Every command reads a [`RunConfig`], writes its files into the output
//! directory and returns what it wrote. Data files carry no timestamps, so the
//! same configuration always produces byte-identical output.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use nanoring_core::io::{write_scalogram_bin, write_spectrum_csv, write_trajectory_csv};
use nanoring_core::logic::{
    booleanize, full_adder, half_adder, toffoli, truth_table, CircuitTrace, GateKind, GateLibrary, MemoryArray,
    MemoryCell, Output, OutputBits, Pump, TruthTable,
};
use nanoring_core::observables::{time_avg_lz, ORBITAL_GYROMAGNETIC_RATIO};
use nanoring_core::propagator::{prepare_pump, propagate, Trajectory};
use nanoring_core::ring::{Helicity, PulseSchedule, RingConfig, WaveFunction};
use nanoring_core::spectral::{dipole_scalogram, dipole_spectrum, measure_lines, LineResult};

pub use config::RunConfig;

/// Exit status for bad configuration or arguments.
pub const EXIT_CONFIG: i32 = 2;
/// Exit status for a failed integration.
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(nanoring_core::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl From<nanoring_core::Error> for CliError {
    fn from(e: nanoring_core::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e)
        } else {
            CliError::Config(e.to_string())
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Numerical(_) => EXIT_NUMERICAL,
            CliError::Io(_) => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn create(dir: &Path, name: &str) -> CliResult<BufWriter<File>> {
    fs::create_dir_all(dir)?;
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> CliResult<PathBuf> {
    let mut w = create(dir, name)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(std::io::Error::from)?;
    writeln!(w)?;
    w.flush()?;
    Ok(dir.join(name))
}

/// Output bits keyed by column name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bits {
    #[serde(rename = "H_I")]
    pub h_i: bool,
    #[serde(rename = "H_II")]
    pub h_ii: bool,
    #[serde(rename = "H_R1")]
    pub h_r1: bool,
    #[serde(rename = "H_R2")]
    pub h_r2: bool,
    #[serde(rename = "L_z")]
    pub l_z: bool,
}

impl From<OutputBits> for Bits {
    fn from(b: OutputBits) -> Self {
        Self { h_i: b.bits[0], h_ii: b.bits[1], h_r1: b.bits[2], h_r2: b.bits[3], l_z: b.bits[4] }
    }
}

impl Bits {
    pub fn as_array(&self) -> [bool; 5] {
        [self.h_i, self.h_ii, self.h_r1, self.h_r2, self.l_z]
    }
}

fn initial_state(config: &RunConfig, ring: &RingConfig) -> CliResult<WaveFunction> {
    Ok(match config.pump.state.helicity() {
        None => WaveFunction::ground(ring),
        Some(h) => prepare_pump(
            ring,
            config.laser.intensity,
            config.laser.photon_energy,
            h,
            config.laser.duration_oc,
            &config.numerics,
        )?,
    })
}

/// `report.json` of a single run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: RunConfig,
    pub final_lz: f64,
    /// Plateau average of `L_z`, hbar.
    pub mean_lz: f64,
    pub lz_sign: i8,
    pub max_norm_deviation: f64,
    pub samples: usize,
    pub scalogram_shape: [usize; 2],
    /// Strongest band power of this run; line thresholds are relative to it.
    pub reference: f64,
    pub lines: Vec<LineResult>,
    pub outputs: Bits,
}

pub const RUN_FILES: [&str; 4] = ["trajectory.csv", "spectrum.csv", "scalogram.bin", "report.json"];

/// Propagates the configured pulse (after the pump, if any) and writes
/// `trajectory.csv`, `spectrum.csv`, `scalogram.bin` and `report.json`.
pub fn cmd_run(config: &RunConfig, out: &Path) -> CliResult<RunReport> {
    config.validate()?;
    let ring = config.ring()?;
    let initial = initial_state(config, &ring)?;
    let traj = propagate(&initial, &PulseSchedule::single(config.pulse()?), &ring, &config.numerics)?;
    let seg = *traj.last_segment();
    let plateau = seg.plateau(traj.period);

    let spectrum = dipole_spectrum(&traj, plateau, config.spectral.taper)?;
    let scalogram = dipole_scalogram(&traj, seg.window(), plateau, &config.scalogram())?;
    let analysis = config.analysis();
    let plan = analysis.band_plan(&ring, config.laser.photon_energy)?;
    let powers = measure_lines(&scalogram, &plan)?;
    let reference = powers.max();
    let lines = powers.classify(analysis.threshold, reference);
    let bits = booleanize(&lines, traj.final_lz(), analysis.lz_threshold);

    write_trajectory_csv(create(out, RUN_FILES[0])?, &traj)?;
    write_spectrum_csv(create(out, RUN_FILES[1])?, &spectrum)?;
    write_scalogram_bin(create(out, RUN_FILES[2])?, &scalogram)?;
    let report = RunReport {
        config: config.clone(),
        final_lz: traj.final_lz(),
        mean_lz: time_avg_lz(&traj, plateau)?,
        lz_sign: bits.lz_sign,
        max_norm_deviation: traj.max_norm_deviation(),
        samples: traj.len(),
        scalogram_shape: [scalogram.rows(), scalogram.cols()],
        reference,
        lines: lines.lines,
        outputs: bits.into(),
    };
    write_json(out, RUN_FILES[3], &report)?;
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub beta: f64,
    pub final_lz: f64,
    pub mean_lz: f64,
}

pub const SWEEP_HEADER: &str = "beta_deg,final_L_z,mean_L_z";

fn sweep_point(config: &RunConfig, ring: &RingConfig, initial: &WaveFunction, beta: f64) -> CliResult<SweepPoint> {
    let pulse = config.pulse()?.with_beta(beta)?;
    let traj: Trajectory = propagate(initial, &PulseSchedule::single(pulse), ring, &config.numerics)?;
    let plateau = traj.last_segment().plateau(traj.period);
    Ok(SweepPoint { beta, final_lz: traj.final_lz(), mean_lz: time_avg_lz(&traj, plateau)? })
}

/// Final and plateau-averaged `L_z` for each polarization angle, in the given
/// order, written to `beta_sweep.csv`.
pub fn cmd_sweep_beta(config: &RunConfig, betas: &[f64], out: &Path) -> CliResult<Vec<SweepPoint>> {
    if betas.is_empty() {
        return Err(CliError::Config("beta list is empty".into()));
    }
    config.validate()?;
    let ring = config.ring()?;
    for &b in betas {
        config.pulse()?.with_beta(b)?;
    }
    let initial = initial_state(config, &ring)?;
    let points = betas
        .par_iter()
        .map(|&b| sweep_point(config, &ring, &initial, b))
        .collect::<CliResult<Vec<_>>>()?;
    let mut w = create(out, "beta_sweep.csv")?;
    writeln!(w, "{SWEEP_HEADER}")?;
    for p in &points {
        writeln!(w, "{:.16e},{:.16e},{:.16e}", p.beta, p.final_lz, p.mean_lz)?;
    }
    w.flush()?;
    Ok(points)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateRow {
    /// `E_x E_y`, e.g. `"10"`.
    pub input: String,
    pub beta: Option<f64>,
    pub outputs: Bits,
    pub final_lz: f64,
    pub mean_lz: f64,
    pub lines: Vec<LineResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub output: Output,
    pub column: [bool; 4],
    pub gate: GateKind,
}

/// One truth table as written to `truth_table.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateTable {
    pub pump: Pump,
    pub threshold: f64,
    pub lz_threshold: f64,
    pub reference: f64,
    pub rows: Vec<GateRow>,
    pub classifications: Vec<Classification>,
}

impl From<&TruthTable> for GateTable {
    fn from(t: &TruthTable) -> Self {
        Self {
            pump: t.context,
            threshold: t.threshold,
            lz_threshold: t.lz_threshold,
            reference: t.reference,
            rows: t
                .rows
                .iter()
                .map(|r| GateRow {
                    input: r.input.label(),
                    beta: r.input.beta(),
                    outputs: r.outputs.into(),
                    final_lz: r.final_lz,
                    mean_lz: r.mean_lz,
                    lines: r.lines.lines.clone(),
                })
                .collect(),
            classifications: t
                .classifications()
                .into_iter()
                .map(|(output, gate)| Classification { output, column: t.column(output), gate })
                .collect(),
        }
    }
}

impl GateTable {
    /// Rows as a 4x5 bit matrix in `00, 10, 01, 11` order.
    pub fn matrix(&self) -> Vec<[bool; 5]> {
        self.rows.iter().map(|r| r.outputs.as_array()).collect()
    }

    pub fn gates(&self) -> Vec<GateKind> {
        self.classifications.iter().map(|c| c.gate).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateFile {
    pub config: RunConfig,
    pub tables: Vec<GateTable>,
}

pub fn gate_tables(config: &RunConfig, pumps: &[Pump]) -> CliResult<Vec<TruthTable>> {
    let exp = config.experiment()?;
    pumps.iter().map(|&p| truth_table(&exp, p).map_err(CliError::from)).collect()
}

/// Truth tables for each pump state, written to `truth_table.json`.
pub fn cmd_gate(config: &RunConfig, pumps: &[Pump], out: &Path) -> CliResult<GateFile> {
    if pumps.is_empty() {
        return Err(CliError::Config("no pump state requested".into()));
    }
    let tables = gate_tables(config, pumps)?;
    let file = GateFile { config: config.clone(), tables: tables.iter().map(GateTable::from).collect() };
    write_json(out, "truth_table.json", &file)?;
    Ok(file)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CircuitKind {
    Half,
    Full,
    Toffoli,
}

impl CircuitKind {
    pub fn arity(self) -> usize {
        match self {
            CircuitKind::Half => 2,
            _ => 3,
        }
    }
}

/// Where circuit primitives come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CircuitMode {
    /// Ideal unpumped ring columns.
    Boolean,
    /// Columns classified from a simulated truth table of the configured ring.
    Simulated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitFile {
    pub kind: CircuitKind,
    pub mode: CircuitMode,
    pub library: GateLibrary,
    pub traces: Vec<CircuitTrace>,
}

/// Every input combination of `arity` bits, first bit fastest.
pub fn all_inputs(arity: usize) -> Vec<Vec<bool>> {
    (0..1usize << arity).map(|code| (0..arity).map(|k| code >> k & 1 == 1).collect()).collect()
}

pub fn evaluate_circuit(kind: CircuitKind, library: &GateLibrary, inputs: &[bool]) -> CliResult<CircuitTrace> {
    if inputs.len() != kind.arity() {
        return Err(CliError::Config(format!("{kind:?} circuit takes {} inputs, got {}", kind.arity(), inputs.len())));
    }
    let trace = match kind {
        CircuitKind::Half => half_adder(library, inputs[0], inputs[1]),
        CircuitKind::Full => full_adder(library, inputs[0], inputs[1], inputs[2]),
        CircuitKind::Toffoli => toffoli(library, inputs[0], inputs[1], inputs[2]),
    };
    trace.map_err(|e| CliError::Config(e.to_string()))
}

/// Evaluates a circuit on the given inputs (all combinations when `None`) and
/// writes `circuit.json`.
pub fn cmd_circuit(
    config: &RunConfig,
    kind: CircuitKind,
    mode: CircuitMode,
    inputs: Option<Vec<bool>>,
    out: &Path,
) -> CliResult<CircuitFile> {
    let cases = match inputs {
        Some(v) => vec![v],
        None => all_inputs(kind.arity()),
    };
    if let Some(bad) = cases.iter().find(|c| c.len() != kind.arity()) {
        return Err(CliError::Config(format!("{kind:?} circuit takes {} inputs, got {}", kind.arity(), bad.len())));
    }
    let library = match mode {
        CircuitMode::Boolean => GateLibrary::ideal(),
        CircuitMode::Simulated => GateLibrary::from_tables(&gate_tables(config, &[Pump::None])?),
    };
    let traces = cases.iter().map(|c| evaluate_circuit(kind, &library, c)).collect::<CliResult<Vec<_>>>()?;
    let file = CircuitFile { kind, mode, library, traces };
    write_json(out, "circuit.json", &file)?;
    Ok(file)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MemoryOp {
    Write,
    Erase,
    Read,
}

impl std::str::FromStr for MemoryOp {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s.trim() {
            "write" => Ok(MemoryOp::Write),
            "erase" => Ok(MemoryOp::Erase),
            "read" => Ok(MemoryOp::Read),
            other => Err(CliError::Config(format!("unknown memory op {other:?} (write, erase, read)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemoryEntry {
    pub step: usize,
    pub op: MemoryOp,
    pub lz: Vec<f64>,
    pub bits: Vec<bool>,
    /// Total moment `gamma * sum L_z`, atomic units.
    pub moment: f64,
}

/// Applies `ops` to an array of `cells` identical rings sharing one spot:
/// `write` is a positive-helicity circular pulse, `erase` the reversed
/// helicity, `read` records the state. Writes `memory_log.json`.
pub fn cmd_memory(config: &RunConfig, ops: &[MemoryOp], cells: usize, out: &Path) -> CliResult<Vec<MemoryEntry>> {
    if ops.is_empty() {
        return Err(CliError::Config("no memory operations given".into()));
    }
    if cells == 0 {
        return Err(CliError::Config("memory needs at least one cell".into()));
    }
    config.validate()?;
    let ring = config.ring()?;
    let laser = config.laser_params();
    let threshold = config.logic.lz_threshold;
    let mut array = MemoryArray::new(&ring, cells);
    let mut log = Vec::with_capacity(ops.len());
    for (step, &op) in ops.iter().enumerate() {
        let helicity = match op {
            MemoryOp::Write => Some(Helicity::Positive),
            MemoryOp::Erase => Some(Helicity::Negative),
            MemoryOp::Read => None,
        };
        if let Some(h) = helicity {
            array.write_all(h, &ring, &laser, &config.numerics, threshold)?;
        }
        log.push(MemoryEntry {
            step,
            op,
            lz: array.cells.iter().map(|c: &MemoryCell| c.lz_state).collect(),
            bits: array.bits(),
            moment: array.moment(ORBITAL_GYROMAGNETIC_RATIO)?.value,
        });
    }
    write_json(out, "memory_log.json", &log)?;
    Ok(log)
}
