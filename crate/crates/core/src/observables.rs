//! Dipole moment, angular momentum and magnetic moments.
//!
//! The dipole carries the `e R` prefactor of `<x> = R <cos phi>` and
//! `<y> = R <sin phi>`. The printed form of the expectation value drops it;
//! every boolean decision downstream uses relative thresholds, so the overall
//! scale does not change any detected line.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::propagator::{TimeWindow, Trajectory};
use crate::ring::{RingConfig, WaveFunction, ELECTRON_CHARGE, ELECTRON_MASS};

/// Orbital gyromagnetic ratio `-e / (2 m_e)` in atomic units.
pub const ORBITAL_GYROMAGNETIC_RATIO: f64 = -ELECTRON_CHARGE / (2.0 * ELECTRON_MASS);

/// `(D_x, D_y)` in atomic units.
pub fn dipole(state: &WaveFunction, ring: &RingConfig) -> [f64; 2] {
    let a = state.coefficients();
    let (mut dx, mut dy) = (0.0, 0.0);
    for pair in a.windows(2) {
        // pair[0] = a_{m-1}, pair[1] = a_m
        let c = pair[0].conj() * pair[1];
        dx += c.re;
        // Im(a*_m a_{m-1}) = -Im(a*_{m-1} a_m)
        dy -= c.im;
    }
    let scale = ELECTRON_CHARGE * ring.radius();
    [scale * dx, scale * dy]
}

/// `sum_m |a_m|^2 m`, in units of hbar.
pub fn angular_momentum(state: &WaveFunction) -> f64 {
    let m_max = state.m_max() as i64;
    state
        .coefficients()
        .iter()
        .enumerate()
        .map(|(i, a)| a.norm_sqr() * (i as i64 - m_max) as f64)
        .sum()
}

/// Average of `L_z(t)` over `window`, trapezoidal rule on the samples that fall
/// inside it.
pub fn time_avg_lz(traj: &Trajectory, window: TimeWindow) -> Result<f64> {
    let eps = 1e-9 * traj.dt_sample;
    let inside: Vec<usize> = (0..traj.times.len())
        .filter(|&i| traj.times[i] >= window.start - eps && traj.times[i] <= window.end + eps)
        .collect();
    if inside.len() < 2 {
        return Err(Error::EmptyWindow { start: window.start, end: window.end });
    }
    let integral: f64 = inside
        .windows(2)
        .map(|w| 0.5 * (traj.lz[w[0]] + traj.lz[w[1]]) * (traj.times[w[1]] - traj.times[w[0]]))
        .sum();
    let span = traj.times[*inside.last().unwrap()] - traj.times[inside[0]];
    Ok(integral / span)
}

/// Magnetic moment `gamma * L_z` (atomic units).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MagneticMoment {
    pub value: f64,
    pub gamma: f64,
}

impl MagneticMoment {
    pub fn from_lz(lz: f64, gamma: f64) -> Self {
        Self { value: gamma * lz, gamma }
    }

    /// Equivalent loop current `m / (pi R^2)` for a single ring.
    pub fn loop_current(&self, ring: &RingConfig) -> f64 {
        self.value / (std::f64::consts::PI * ring.radius() * ring.radius())
    }
}

/// Total moment of the rings inside one laser spot.
///
/// The sum is compensated, so `n` identical cells give exactly the rounded
/// `n * L_z`.
pub fn array_moment(lz_values: &[f64], gamma: f64) -> Result<MagneticMoment> {
    if lz_values.is_empty() {
        return Err(Error::EmptyArray);
    }
    Ok(MagneticMoment::from_lz(compensated_sum(lz_values), gamma))
}

/// Neumaier summation.
fn compensated_sum(values: &[f64]) -> f64 {
    let (mut sum, mut c) = (0.0f64, 0.0f64);
    for &v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            c += (sum - t) + v;
        } else {
            c += (v - t) + sum;
        }
        sum = t;
    }
    sum + c
}
