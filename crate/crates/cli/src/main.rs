use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{info, warn};

use nanoring_cli::{
    cmd_circuit, cmd_gate, cmd_memory, cmd_run, cmd_sweep_beta, CircuitKind, CircuitMode, CliError, CliResult,
    MemoryOp, RunConfig, EXIT_CONFIG,
};
use nanoring_core::logic::Pump;
use nanoring_core::ring::Helicity;

/// Nanoring driven by polarized laser pulses: harmonics, logic gates and memory.
#[derive(Debug, Parser)]
#[command(name = "nanoring", version)]
struct Cli {
    #[command(flatten)]
    common: Common,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// TOML run configuration; built-in defaults when omitted.
    #[arg(short, long, global = true)]
    config: Option<PathBuf>,

    /// Output directory, overriding [output].dir.
    #[arg(short, long, global = true, env = "NANORING_OUT")]
    out: Option<PathBuf>,

    /// Ring radius in bohr.
    #[arg(long, global = true)]
    radius: Option<f64>,

    /// Basis runs over m = -m_max..m_max.
    #[arg(long, global = true)]
    m_max: Option<usize>,

    /// Peak intensity in W/cm^2.
    #[arg(long, global = true)]
    intensity: Option<f64>,

    /// Photon energy in eV.
    #[arg(long, global = true)]
    photon_energy: Option<f64>,

    /// Polarization angle in degrees (0 = x, 90 = y, 45 = circular).
    #[arg(long, global = true)]
    beta: Option<f64>,

    /// Pulse length in optical cycles.
    #[arg(long, global = true)]
    duration_oc: Option<f64>,

    /// Helicity of the circular component, +1 or -1.
    #[arg(long, global = true, allow_hyphen_values = true)]
    helicity: Option<i8>,

    /// Circular pump pulse applied before the probe.
    #[arg(long, global = true, value_enum)]
    pump: Option<PumpArg>,

    /// Integrator steps per optical cycle.
    #[arg(long, global = true)]
    steps_per_oc: Option<usize>,

    /// Relative line-detection threshold.
    #[arg(long, global = true)]
    threshold: Option<f64>,

    /// |L_z| in hbar above which the angular-momentum bit is set.
    #[arg(long, global = true)]
    lz_threshold: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PumpArg {
    None,
    Positive,
    Negative,
}

impl From<PumpArg> for Pump {
    fn from(p: PumpArg) -> Self {
        match p {
            PumpArg::None => Pump::None,
            PumpArg::Positive => Pump::Positive,
            PumpArg::Negative => Pump::Negative,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GatePumps {
    None,
    Positive,
    Negative,
    /// All three pump states.
    All,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Propagate one pulse; writes trajectory.csv, spectrum.csv, scalogram.bin and report.json.
    Run,
    /// Final and averaged L_z against polarization angle; writes beta_sweep.csv.
    SweepBeta {
        /// Comma-separated angles in degrees.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        betas: Vec<f64>,
    },
    /// Truth tables and gate classifications; writes truth_table.json.
    Gate {
        /// Pump states to tabulate; defaults to [pump].state.
        #[arg(long = "tables", value_enum)]
        tables: Option<GatePumps>,
    },
    /// Evaluate a half adder, full adder or Toffoli gate; writes circuit.json.
    Circuit {
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Where gate columns come from.
        #[arg(long, value_enum, default_value = "boolean")]
        mode: ModeArg,
        /// Comma-separated bits, e.g. 1,1,0; all combinations when omitted.
        #[arg(long, value_delimiter = ',')]
        inputs: Option<Vec<u8>>,
    },
    /// Write, erase and read an array of rings; writes memory_log.json.
    Memory {
        /// Comma-separated operations: write, erase, read.
        #[arg(long, value_delimiter = ',', required = true)]
        ops: Vec<String>,
        #[arg(long, default_value_t = 1)]
        cells: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Half,
    Full,
    Toffoli,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Boolean,
    Simulated,
}

fn load_config(c: &Common) -> CliResult<RunConfig> {
    let mut cfg = match &c.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(v) = &c.out {
        cfg.output.dir = v.clone();
    }
    if let Some(v) = c.radius {
        cfg.ring.radius = v;
    }
    if let Some(v) = c.m_max {
        cfg.ring.m_max = v;
    }
    if let Some(v) = c.intensity {
        cfg.laser.intensity = v;
    }
    if let Some(v) = c.photon_energy {
        cfg.laser.photon_energy = v;
    }
    if let Some(v) = c.beta {
        cfg.laser.beta = v;
    }
    if let Some(v) = c.duration_oc {
        cfg.laser.duration_oc = v;
    }
    if let Some(v) = c.helicity {
        cfg.laser.helicity = Helicity::try_from(v).map_err(|e| CliError::Config(e.to_string()))?;
    }
    if let Some(v) = c.pump {
        cfg.pump.state = v.into();
    }
    if let Some(v) = c.steps_per_oc {
        cfg.numerics.steps_per_oc = v;
    }
    if let Some(v) = c.threshold {
        cfg.spectral.threshold = v;
    }
    if let Some(v) = c.lz_threshold {
        cfg.logic.lz_threshold = v;
    }
    for w in cfg.range_warnings() {
        warn!("{w}");
    }
    Ok(cfg)
}

fn bits(v: &[u8]) -> CliResult<Vec<bool>> {
    v.iter()
        .map(|&b| match b {
            0 => Ok(false),
            1 => Ok(true),
            _ => Err(CliError::Config(format!("input bit must be 0 or 1, got {b}"))),
        })
        .collect()
}

fn fmt_bits(b: &[bool]) -> String {
    b.iter().map(|&x| if x { '1' } else { '0' }).collect()
}

fn execute(cli: Cli) -> CliResult<()> {
    let cfg = load_config(&cli.common)?;
    let out = cfg.output.dir.clone();
    match cli.command {
        Command::Run => {
            let r = cmd_run(&cfg, &out)?;
            println!("final L_z = {:.6e} hbar, <L_z> = {:.6e} hbar", r.final_lz, r.mean_lz);
            for l in &r.lines {
                println!("{:5} [{:.3}, {:.3}] eV  power {:.4e}  {}", l.line, l.band.lo, l.band.hi, l.power, l.present as u8);
            }
        }
        Command::SweepBeta { betas } => {
            for p in cmd_sweep_beta(&cfg, &betas, &out)? {
                println!("beta {:6.2}  final L_z {:+.6e}  <L_z> {:+.6e}", p.beta, p.final_lz, p.mean_lz);
            }
        }
        Command::Gate { tables } => {
            let pumps = match tables {
                None => vec![cfg.pump.state],
                Some(GatePumps::None) => vec![Pump::None],
                Some(GatePumps::Positive) => vec![Pump::Positive],
                Some(GatePumps::Negative) => vec![Pump::Negative],
                Some(GatePumps::All) => Pump::ALL.to_vec(),
            };
            for t in cmd_gate(&cfg, &pumps, &out)?.tables {
                println!("pump {}", t.pump);
                println!("in  H_I H_II H_R1 H_R2 L_z");
                for r in &t.rows {
                    let b = r.outputs.as_array().map(|x| x as u8);
                    println!("{}  {:>3} {:>4} {:>4} {:>4} {:>3}", r.input, b[0], b[1], b[2], b[3], b[4]);
                }
                let names: Vec<String> = t.gates().iter().map(|g| g.to_string()).collect();
                println!("    {}", names.join(" "));
            }
        }
        Command::Circuit { kind, mode, inputs } => {
            let kind = match kind {
                KindArg::Half => CircuitKind::Half,
                KindArg::Full => CircuitKind::Full,
                KindArg::Toffoli => CircuitKind::Toffoli,
            };
            let mode = match mode {
                ModeArg::Boolean => CircuitMode::Boolean,
                ModeArg::Simulated => CircuitMode::Simulated,
            };
            let inputs = inputs.as_deref().map(bits).transpose()?;
            for t in cmd_circuit(&cfg, kind, mode, inputs, &out)?.traces {
                println!("{} -> {}", fmt_bits(&t.inputs), fmt_bits(&t.outputs));
            }
        }
        Command::Memory { ops, cells } => {
            let ops = ops.iter().map(|s| s.parse::<MemoryOp>()).collect::<CliResult<Vec<_>>>()?;
            for e in cmd_memory(&cfg, &ops, cells, &out)? {
                println!("{:2} {:5?}  bits {}  L_z[0] {:+.6e}  moment {:+.6e}", e.step, e.op, fmt_bits(&e.bits), e.lz[0], e.moment);
            }
        }
    }
    info!("wrote results to {}", out.display());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
