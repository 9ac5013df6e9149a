//! Angular momentum as a stored bit.
//!
//! A circular pulse of positive helicity writes a cell, the reversed helicity
//! erases it. The moment of an array of cells is the sum of their `L_z`.

use super::LaserParams;
use crate::error::Result;
use crate::observables::{angular_momentum, array_moment, MagneticMoment};
use crate::propagator::{propagate, Numerics};
use crate::ring::{Helicity, LaserPulse, PulseSchedule, RingConfig, WaveFunction};

#[derive(Debug, Clone, PartialEq)]
pub struct MemoryCell {
    pub state: WaveFunction,
    /// Final `L_z` of the last operation, hbar.
    pub lz_state: f64,
    pub bit: bool,
}

impl MemoryCell {
    pub fn empty(ring: &RingConfig) -> Self {
        Self { state: WaveFunction::ground(ring), lz_state: 0.0, bit: false }
    }

    fn from_state(state: WaveFunction, threshold: f64) -> Self {
        let lz_state = angular_momentum(&state);
        Self { state, lz_state, bit: lz_state > threshold }
    }
}

/// Drives `cell` with a circular pulse of the given helicity.
///
/// Zero intensity leaves the cell in free evolution.
pub fn memory_write(
    cell: &MemoryCell,
    helicity: Helicity,
    ring: &RingConfig,
    laser: &LaserParams,
    numerics: &Numerics,
    threshold: f64,
) -> Result<MemoryCell> {
    let pulse = if laser.intensity == 0.0 {
        LaserPulse::off(laser.photon_energy, laser.duration_oc, laser.ramp_oc)?
    } else {
        laser.pulse(45.0)?.with_helicity(helicity)
    };
    let traj = propagate(&cell.state, &PulseSchedule::single(pulse), ring, numerics)?;
    Ok(MemoryCell::from_state(traj.final_state, threshold))
}

/// Cells sharing one laser spot.
#[derive(Debug, Clone, PartialEq)]
pub struct MemoryArray {
    pub cells: Vec<MemoryCell>,
}

impl MemoryArray {
    pub fn new(ring: &RingConfig, n: usize) -> Self {
        Self { cells: vec![MemoryCell::empty(ring); n] }
    }

    /// Applies the same pulse to every cell. Identical cells stay identical, so
    /// one propagation serves all of them.
    pub fn write_all(
        &mut self,
        helicity: Helicity,
        ring: &RingConfig,
        laser: &LaserParams,
        numerics: &Numerics,
        threshold: f64,
    ) -> Result<()> {
        let mut done: Vec<(usize, MemoryCell)> = Vec::new();
        for i in 0..self.cells.len() {
            let cached = done.iter().find(|(j, _)| self.cells[*j] == self.cells[i]).map(|(_, c)| c.clone());
            let next = match cached {
                Some(c) => c,
                None => memory_write(&self.cells[i], helicity, ring, laser, numerics, threshold)?,
            };
            done.push((i, next));
        }
        for (i, c) in done {
            self.cells[i] = c;
        }
        Ok(())
    }

    pub fn bits(&self) -> Vec<bool> {
        self.cells.iter().map(|c| c.bit).collect()
    }

    pub fn moment(&self, gamma: f64) -> Result<MagneticMoment> {
        let lz: Vec<f64> = self.cells.iter().map(|c| c.lz_state).collect();
        array_moment(&lz, gamma)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laser_off_keeps_cell_empty() {
        let ring = RingConfig::new(2.7, 8).unwrap();
        let laser = LaserParams { intensity: 0.0, duration_oc: 8.0, ..LaserParams::default() };
        let numerics = Numerics { steps_per_oc: 256, samples_per_oc: 8, ..Numerics::default() };
        let cell = memory_write(&MemoryCell::empty(&ring), Helicity::Positive, &ring, &laser, &numerics, 0.01).unwrap();
        assert!(!cell.bit);
        assert_eq!(cell.lz_state, 0.0);
    }

    #[test]
    fn bit_follows_sign_and_threshold() {
        let ring = RingConfig::new(2.7, 4).unwrap();
        let up = MemoryCell::from_state(WaveFunction::eigenstate(&ring, 1).unwrap(), 0.5);
        let down = MemoryCell::from_state(WaveFunction::eigenstate(&ring, -1).unwrap(), 0.5);
        assert!(up.bit);
        assert!(!down.bit);
        assert_eq!(down.lz_state, -1.0);
    }
}
