use thiserror::Error;

use crate::logic::GateKind;
use crate::spectral::Line;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid ring: {0}")]
    InvalidRing(String),

    #[error("invalid laser pulse: {0}")]
    InvalidPulse(String),

    #[error("invalid pulse schedule: {0}")]
    InvalidSchedule(String),

    #[error("invalid numerics: {0}")]
    InvalidNumerics(String),

    #[error("state has {got} coefficients but the ring basis needs {expected}")]
    BasisMismatch { expected: usize, got: usize },

    #[error("norm drifted by {deviation:e} at t = {t_oc:.4} oc (time step too large?)")]
    NormDrift { t_oc: f64, deviation: f64 },

    #[error("population {population:e} near the basis edge at t = {t_oc:.4} oc (increase m_max)")]
    TruncationPressure { t_oc: f64, population: f64 },

    #[error("pump left |L_z| = {lz:e} hbar, too weak to set a pseudo-spin")]
    PumpFailed { lz: f64 },

    #[error("time window [{start:.4}, {end:.4}] au holds fewer than two samples")]
    EmptyWindow { start: f64, end: f64 },

    #[error("analysis window spans {span_oc:.3} oc, at least {min_oc} oc required")]
    WindowTooShort { span_oc: f64, min_oc: f64 },

    #[error("detection bands of {first} and {second} intersect")]
    BandOverlap { first: Line, second: Line },

    #[error("invalid spectral setting: {0}")]
    InvalidSpectral(String),

    #[error("array moment needs at least one ring in the laser spot")]
    EmptyArray,

    #[error("no ring output realizes a {0} gate")]
    MissingGate(GateKind),
}

impl Error {
    /// True for failures of the numerical integration itself, as opposed to
    /// bad inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NormDrift { .. } | Error::TruncationPressure { .. } | Error::PumpFailed { .. }
        )
    }
}
