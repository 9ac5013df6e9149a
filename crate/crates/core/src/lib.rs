//! Single-active-electron nanoring in a polarized laser field.
//!
//! The electron lives on a ring of radius `R` in the basis `|m>`,
//! `m = -m_max..=m_max`. [`propagator`] integrates the driven Schrodinger
//! equation, [`observables`] reads the dipole and `L_z` off the state,
//! [`spectral`] finds emission lines with a Morlet wavelet transform and
//! [`logic`] turns polarizations and lines into truth tables, circuits and a
//! memory array. Everything is in atomic units unless a name says otherwise;
//! photon and line energies are in eV.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod io;
pub mod logic;
pub mod observables;
pub mod propagator;
pub mod ring;
pub mod spectral;

pub use error::{Error, Result};
pub use logic::{truth_table, Experiment, GateKind, InputState, LaserParams, Output, Pump, TruthTable};
pub use propagator::{propagate, Numerics, TimeWindow, Trajectory};
pub use ring::{Helicity, LaserPulse, PulseSchedule, RingConfig, WaveFunction};
pub use spectral::{Line, LineReport, Scalogram, Spectrum};
