//! Run configuration: a TOML file with one table per concern, overridable from
//! the command line.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use nanoring_core::logic::{AnalysisSettings, Experiment, LaserParams, Pump, DEFAULT_LZ_THRESHOLD};
use nanoring_core::propagator::Numerics;
use nanoring_core::ring::{Helicity, LaserPulse, RingConfig};
use nanoring_core::spectral::{
    default_half_width, EnergyGrid, Line, ScalogramConfig, Taper, DEFAULT_SIGMA0, DEFAULT_THRESHOLD,
};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RingSection {
    /// Bohr.
    pub radius: f64,
    pub m_max: usize,
}

impl Default for RingSection {
    fn default() -> Self {
        Self { radius: 2.7, m_max: RingConfig::DEFAULT_M_MAX }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LaserSection {
    /// W/cm^2.
    pub intensity: f64,
    /// eV.
    pub photon_energy: f64,
    /// Degrees.
    pub beta: f64,
    pub duration_oc: f64,
    pub ramp_oc: f64,
    pub helicity: Helicity,
}

impl Default for LaserSection {
    fn default() -> Self {
        Self {
            intensity: 1e14,
            photon_energy: 2.0,
            beta: 45.0,
            duration_oc: 32.0,
            ramp_oc: 2.0,
            helicity: Helicity::Positive,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PumpSection {
    pub state: Pump,
}

impl Default for PumpSection {
    fn default() -> Self {
        Self { state: Pump::None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectralSection {
    pub sigma0: f64,
    /// Analysis grid in eV; unset values follow the photon energy.
    pub e_min: Option<f64>,
    pub e_max: Option<f64>,
    pub e_step: Option<f64>,
    pub time_stride: usize,
    /// Band half-width in eV; unset means a quarter photon energy.
    pub half_width: Option<f64>,
    pub threshold: f64,
    pub lines: Vec<Line>,
    pub taper: Taper,
}

impl Default for SpectralSection {
    fn default() -> Self {
        Self {
            sigma0: DEFAULT_SIGMA0,
            e_min: None,
            e_max: None,
            e_step: None,
            time_stride: 4,
            half_width: None,
            threshold: DEFAULT_THRESHOLD,
            lines: Line::ALL.to_vec(),
            taper: Taper::Hann,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LogicSection {
    /// hbar.
    pub lz_threshold: f64,
}

impl Default for LogicSection {
    fn default() -> Self {
        Self { lz_threshold: DEFAULT_LZ_THRESHOLD }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub dir: PathBuf,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { dir: PathBuf::from("out") }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub ring: RingSection,
    pub laser: LaserSection,
    pub pump: PumpSection,
    pub numerics: Numerics,
    pub spectral: SpectralSection,
    pub logic: LogicSection,
    pub output: OutputSection,
}

/// Ranges the model was set up for; values outside them only warn.
pub const INTENSITY_RANGE: [f64; 2] = [1e10, 1e14];
pub const PHOTON_ENERGY_RANGE: [f64; 2] = [0.1, 2.0];
pub const RADIUS_RANGE: [f64; 2] = [2.7, 100.0];

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Messages for physical parameters outside the usual ranges.
    pub fn range_warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut check = |name: &str, v: f64, [lo, hi]: [f64; 2], unit: &str| {
            if v < lo || v > hi {
                out.push(format!("{name} = {v} {unit} is outside [{lo}, {hi}] {unit}"));
            }
        };
        if self.laser.intensity != 0.0 {
            check("intensity", self.laser.intensity, INTENSITY_RANGE, "W/cm^2");
        }
        check("photon_energy", self.laser.photon_energy, PHOTON_ENERGY_RANGE, "eV");
        check("radius", self.ring.radius, RADIUS_RANGE, "bohr");
        out
    }

    pub fn ring(&self) -> Result<RingConfig, CliError> {
        Ok(RingConfig::new(self.ring.radius, self.ring.m_max)?)
    }

    pub fn pulse(&self) -> Result<LaserPulse, CliError> {
        let l = &self.laser;
        Ok(LaserPulse::new(l.intensity, l.photon_energy, l.beta, l.duration_oc, l.ramp_oc)?.with_helicity(l.helicity))
    }

    pub fn laser_params(&self) -> LaserParams {
        let l = &self.laser;
        LaserParams {
            intensity: l.intensity,
            photon_energy: l.photon_energy,
            duration_oc: l.duration_oc,
            ramp_oc: l.ramp_oc,
        }
    }

    pub fn scalogram(&self) -> ScalogramConfig {
        let s = &self.spectral;
        let base = EnergyGrid::for_photon_energy(self.laser.photon_energy);
        ScalogramConfig {
            sigma0: s.sigma0,
            energies: EnergyGrid {
                min: s.e_min.unwrap_or(base.min),
                max: s.e_max.unwrap_or(base.max),
                step: s.e_step.unwrap_or(base.step),
            },
            time_stride: s.time_stride,
        }
    }

    pub fn analysis(&self) -> AnalysisSettings {
        AnalysisSettings {
            scalogram: self.scalogram(),
            threshold: self.spectral.threshold,
            half_width: self.spectral.half_width.unwrap_or_else(|| default_half_width(self.laser.photon_energy)),
            lz_threshold: self.logic.lz_threshold,
            lines: self.spectral.lines.clone(),
        }
    }

    pub fn experiment(&self) -> Result<Experiment, CliError> {
        let exp = Experiment {
            ring: self.ring()?,
            laser: self.laser_params(),
            numerics: self.numerics,
            analysis: self.analysis(),
        };
        self.validate()?;
        Ok(exp)
    }

    /// Rejects settings that cannot run before any propagation starts.
    pub fn validate(&self) -> Result<(), CliError> {
        self.ring()?;
        self.pulse()?;
        self.numerics.validate()?;
        let bad = |m: String| Err(CliError::Config(m));
        let s = &self.spectral;
        if !(s.sigma0 > 0.0) {
            return bad(format!("spectral.sigma0 must be > 0, got {}", s.sigma0));
        }
        if s.time_stride == 0 {
            return bad("spectral.time_stride must be >= 1".into());
        }
        let grid = self.scalogram().energies;
        if !(grid.min > 0.0 && grid.step > 0.0 && grid.max >= grid.min) {
            return bad(format!("bad energy grid {} .. {} step {}", grid.min, grid.max, grid.step));
        }
        if !(s.threshold > 0.0 && s.threshold < 1.0) {
            return bad(format!("spectral.threshold must lie in (0, 1), got {}", s.threshold));
        }
        if !(self.logic.lz_threshold >= 0.0) {
            return bad(format!("logic.lz_threshold must be >= 0, got {}", self.logic.lz_threshold));
        }
        self.analysis().band_plan(&self.ring()?, self.laser.photon_energy)?;
        Ok(())
    }
}
