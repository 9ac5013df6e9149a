//! Ring geometry, the laser drive and the ring Hamiltonian.
//!
//! Everything inside the crate works in atomic units (hbar = m_e = e = 1).
//! Photon energies arrive in eV and intensities in W/cm^2; they are converted
//! once, here.
//!
//! The basis is the set of angular-momentum eigenstates `e^{i m phi}/sqrt(2 pi)`
//! truncated to `m = -m_max ..= m_max`. In that basis `cos(phi)` and `sin(phi)`
//! only connect neighbouring `m`, so the Hamiltonian is tridiagonal:
//!
//! ```text
//! <m|H|m>   = m^2 / (2 R^2)
//! <m+1|H|m> = R (E_x - i E_y) / 2
//! <m-1|H|m> = R (E_x + i E_y) / 2
//! ```

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Hartree energy in eV.
pub const HARTREE_EV: f64 = 27.211_386_245_988;

/// Intensity corresponding to a field amplitude of one atomic unit, W/cm^2.
pub const ATOMIC_UNIT_INTENSITY_W_CM2: f64 = 3.509_45e16;

/// Electron mass, charge and hbar in atomic units.
pub const ELECTRON_MASS: f64 = 1.0;
pub const ELECTRON_CHARGE: f64 = 1.0;
pub const HBAR: f64 = 1.0;

/// Atomic unit of time in femtoseconds.
pub const AU_TIME_FS: f64 = 2.418_884_326_585_7e-2;

pub fn ev_to_hartree(ev: f64) -> f64 {
    ev / HARTREE_EV
}

pub fn hartree_to_ev(hartree: f64) -> f64 {
    hartree * HARTREE_EV
}

/// Peak field amplitude (a.u.) of a laser with the given intensity.
pub fn amplitude_from_intensity(intensity_w_cm2: f64) -> f64 {
    (intensity_w_cm2.max(0.0) / ATOMIC_UNIT_INTENSITY_W_CM2).sqrt()
}

/// Ring radius and basis truncation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RingConfig {
    radius: f64,
    m_max: usize,
}

impl RingConfig {
    pub const DEFAULT_M_MAX: usize = 64;

    /// `radius` in Bohr radii; the basis spans `m = -m_max ..= m_max`.
    pub fn new(radius: f64, m_max: usize) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidRing(format!("radius must be positive, got {radius}")));
        }
        if m_max < 1 {
            return Err(Error::InvalidRing("m_max must be at least 1".into()));
        }
        Ok(Self { radius, m_max })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn m_max(&self) -> usize {
        self.m_max
    }

    /// Number of basis states.
    pub fn dim(&self) -> usize {
        2 * self.m_max + 1
    }

    /// Position of `|m>` in a coefficient vector.
    pub fn index(&self, m: i64) -> Option<usize> {
        let shifted = m + self.m_max as i64;
        (0..self.dim() as i64).contains(&shifted).then_some(shifted as usize)
    }

    pub fn quantum_number(&self, index: usize) -> i64 {
        index as i64 - self.m_max as i64
    }

    pub fn quantum_numbers(&self) -> impl Iterator<Item = i64> {
        let m = self.m_max as i64;
        -m..=m
    }

    pub fn level_energy(&self, m: i64) -> f64 {
        level_energy(m, self)
    }

    pub fn with_m_max(&self, m_max: usize) -> Result<Self> {
        Self::new(self.radius, m_max)
    }
}

/// Free-ring energy `m^2 / (2 R^2)` in hartree.
pub fn level_energy(m: i64, ring: &RingConfig) -> f64 {
    debug_assert!(m.unsigned_abs() as usize <= ring.m_max);
    let m = m as f64;
    HBAR * HBAR * m * m / (2.0 * ELECTRON_MASS * ring.radius * ring.radius)
}

pub fn level_energy_ev(m: i64, ring: &RingConfig) -> f64 {
    hartree_to_ev(level_energy(m, ring))
}

/// Sign multiplying the y component of the field. Flipping it reverses the
/// rotation sense of a circularly polarized pulse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub enum Helicity {
    Positive,
    Negative,
}

impl Helicity {
    pub fn sign(self) -> f64 {
        match self {
            Helicity::Positive => 1.0,
            Helicity::Negative => -1.0,
        }
    }

    pub fn reversed(self) -> Self {
        match self {
            Helicity::Positive => Helicity::Negative,
            Helicity::Negative => Helicity::Positive,
        }
    }
}

impl TryFrom<i8> for Helicity {
    type Error = String;

    fn try_from(value: i8) -> std::result::Result<Self, Self::Error> {
        match value {
            1 => Ok(Helicity::Positive),
            -1 => Ok(Helicity::Negative),
            other => Err(format!("helicity must be +1 or -1, got {other}")),
        }
    }
}

impl From<Helicity> for i8 {
    fn from(h: Helicity) -> i8 {
        match h {
            Helicity::Positive => 1,
            Helicity::Negative => -1,
        }
    }
}

/// One segment of the drive: a trapezoidal pulse with polarization angle beta.
///
/// `beta = 0` polarizes along x, `90` along y and `45` is circular.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaserPulse {
    /// W/cm^2; zero means the laser is off.
    pub intensity: f64,
    /// Photon energy in eV.
    pub photon_energy: f64,
    /// Polarization angle in degrees.
    pub beta: f64,
    /// Total length in optical cycles, ramps included.
    pub duration_oc: f64,
    /// Length of each linear ramp in optical cycles.
    pub ramp_oc: f64,
    pub helicity: Helicity,
}

impl LaserPulse {
    pub fn new(
        intensity: f64,
        photon_energy: f64,
        beta: f64,
        duration_oc: f64,
        ramp_oc: f64,
    ) -> Result<Self> {
        let pulse = Self {
            intensity,
            photon_energy,
            beta,
            duration_oc,
            ramp_oc,
            helicity: Helicity::Positive,
        };
        pulse.validate()?;
        Ok(pulse)
    }

    /// A field-free segment of the given length.
    pub fn off(photon_energy: f64, duration_oc: f64, ramp_oc: f64) -> Result<Self> {
        Self::new(0.0, photon_energy, 0.0, duration_oc, ramp_oc)
    }

    pub fn with_helicity(mut self, helicity: Helicity) -> Self {
        self.helicity = helicity;
        self
    }

    pub fn with_beta(mut self, beta: f64) -> Result<Self> {
        self.beta = beta;
        self.validate()?;
        Ok(self)
    }

    pub fn with_intensity(mut self, intensity: f64) -> Result<Self> {
        self.intensity = intensity;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidPulse(msg));
        if !(self.intensity.is_finite() && self.intensity >= 0.0) {
            return bad(format!("intensity must be >= 0, got {}", self.intensity));
        }
        if !(self.photon_energy.is_finite() && self.photon_energy > 0.0) {
            return bad(format!("photon energy must be > 0, got {}", self.photon_energy));
        }
        if !(0.0..=90.0).contains(&self.beta) {
            return bad(format!("beta must lie in [0, 90] degrees, got {}", self.beta));
        }
        if !(self.duration_oc.is_finite() && self.duration_oc > 0.0) {
            return bad(format!("duration must be > 0 oc, got {}", self.duration_oc));
        }
        if !(self.ramp_oc.is_finite() && self.ramp_oc >= 0.0) {
            return bad(format!("ramp must be >= 0 oc, got {}", self.ramp_oc));
        }
        if 2.0 * self.ramp_oc > self.duration_oc {
            return bad(format!(
                "two ramps of {} oc do not fit in {} oc",
                self.ramp_oc, self.duration_oc
            ));
        }
        Ok(())
    }

    pub fn is_off(&self) -> bool {
        self.intensity == 0.0
    }

    /// Carrier angular frequency, a.u.
    pub fn omega(&self) -> f64 {
        ev_to_hartree(self.photon_energy)
    }

    /// One optical cycle, a.u.
    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega()
    }

    pub fn duration(&self) -> f64 {
        self.duration_oc * self.period()
    }

    /// Peak amplitude E0, a.u.
    pub fn amplitude(&self) -> f64 {
        amplitude_from_intensity(self.intensity)
    }
}

/// Trapezoidal envelope at time `t` (a.u., measured from the pulse start).
/// Zero outside the pulse.
pub fn envelope(t: f64, pulse: &LaserPulse) -> f64 {
    let s = t / pulse.period();
    if !(0.0..=pulse.duration_oc).contains(&s) {
        return 0.0;
    }
    if pulse.ramp_oc == 0.0 {
        return 1.0;
    }
    let rise = s / pulse.ramp_oc;
    let fall = (pulse.duration_oc - s) / pulse.ramp_oc;
    rise.min(fall).min(1.0)
}

/// Electric field `(E_x, E_y)` in a.u. at local time `t`.
pub fn field_at(t: f64, pulse: &LaserPulse) -> [f64; 2] {
    if pulse.is_off() {
        return [0.0, 0.0];
    }
    let f = pulse.amplitude() * envelope(t, pulse);
    let beta = pulse.beta.to_radians();
    let phase = pulse.omega() * t;
    [
        f * beta.cos() * phase.cos(),
        pulse.helicity.sign() * f * beta.sin() * phase.sin(),
    ]
}

/// Pulses played back to back, each with its own local clock.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseSchedule {
    segments: Vec<LaserPulse>,
}

impl PulseSchedule {
    pub fn new(segments: Vec<LaserPulse>) -> Result<Self> {
        let Some(first) = segments.first() else {
            return Err(Error::InvalidSchedule("no segments".into()));
        };
        for seg in &segments {
            seg.validate()?;
            let rel = (seg.photon_energy - first.photon_energy).abs() / first.photon_energy;
            if rel > 1e-12 {
                return Err(Error::InvalidSchedule(format!(
                    "segments mix photon energies {} and {} eV",
                    first.photon_energy, seg.photon_energy
                )));
            }
        }
        Ok(Self { segments })
    }

    pub fn single(pulse: LaserPulse) -> Self {
        Self { segments: vec![pulse] }
    }

    pub fn segments(&self) -> &[LaserPulse] {
        &self.segments
    }

    pub fn photon_energy(&self) -> f64 {
        self.segments[0].photon_energy
    }

    pub fn period(&self) -> f64 {
        self.segments[0].period()
    }

    pub fn duration_oc(&self) -> f64 {
        self.segments.iter().map(|s| s.duration_oc).sum()
    }

    pub fn duration(&self) -> f64 {
        self.duration_oc() * self.period()
    }

    /// Start of every segment in optical cycles, relative to the schedule start.
    pub fn segment_starts_oc(&self) -> Vec<f64> {
        self.segments
            .iter()
            .scan(0.0, |acc, s| {
                let start = *acc;
                *acc += s.duration_oc;
                Some(start)
            })
            .collect()
    }

    /// The segment active at `t` (a.u. from the schedule start) and the local
    /// time inside it. Segments are half-open `[start, end)`.
    pub fn locate(&self, t: f64) -> Option<(&LaserPulse, f64)> {
        let period = self.period();
        let mut start = 0.0;
        for seg in &self.segments {
            let end = start + seg.duration_oc * period;
            if t >= start && t < end {
                return Some((seg, t - start));
            }
            start = end;
        }
        None
    }

    pub fn field_at(&self, t: f64) -> [f64; 2] {
        match self.locate(t) {
            Some((pulse, local)) => field_at(local, pulse),
            None => [0.0, 0.0],
        }
    }
}

/// State `sum_m a_m |m>` at time `t` (a.u.).
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction {
    coefficients: Vec<Complex64>,
    m_max: usize,
    t: f64,
}

impl WaveFunction {
    pub fn ground(ring: &RingConfig) -> Self {
        Self::eigenstate(ring, 0).expect("m = 0 is always in the basis")
    }

    pub fn eigenstate(ring: &RingConfig, m: i64) -> Result<Self> {
        let idx = ring.index(m).ok_or_else(|| {
            Error::InvalidRing(format!("m = {m} outside basis of m_max = {}", ring.m_max()))
        })?;
        let mut coefficients = vec![Complex64::new(0.0, 0.0); ring.dim()];
        coefficients[idx] = Complex64::new(1.0, 0.0);
        Ok(Self { coefficients, m_max: ring.m_max(), t: 0.0 })
    }

    pub fn from_coefficients(ring: &RingConfig, coefficients: Vec<Complex64>, t: f64) -> Result<Self> {
        if coefficients.len() != ring.dim() {
            return Err(Error::BasisMismatch { expected: ring.dim(), got: coefficients.len() });
        }
        Ok(Self { coefficients, m_max: ring.m_max(), t })
    }

    /// Builds a state from `(m, amplitude)` pairs; unlisted states are empty.
    pub fn superposition(ring: &RingConfig, terms: &[(i64, Complex64)]) -> Result<Self> {
        let mut psi = Self::eigenstate(ring, 0)?;
        psi.coefficients[ring.m_max()] = Complex64::new(0.0, 0.0);
        for &(m, a) in terms {
            let idx = ring.index(m).ok_or_else(|| {
                Error::InvalidRing(format!("m = {m} outside basis of m_max = {}", ring.m_max()))
            })?;
            psi.coefficients[idx] += a;
        }
        Ok(psi)
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn coefficients_mut(&mut self) -> &mut [Complex64] {
        &mut self.coefficients
    }

    pub fn m_max(&self) -> usize {
        self.m_max
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn set_time(&mut self, t: f64) {
        self.t = t;
    }

    /// Amplitude of `|m>`, zero outside the basis.
    pub fn amplitude(&self, m: i64) -> Complex64 {
        let shifted = m + self.m_max as i64;
        if (0..self.coefficients.len() as i64).contains(&shifted) {
            self.coefficients[shifted as usize]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coefficients.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalize(&mut self) {
        let n = self.norm_sqr().sqrt();
        if n > 0.0 {
            self.coefficients.iter_mut().for_each(|a| *a /= n);
        }
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &WaveFunction) -> Complex64 {
        self.coefficients
            .iter()
            .zip(&other.coefficients)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn populations(&self) -> Vec<f64> {
        self.coefficients.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Population in the states with `|m| >= m_max - margin`.
    pub fn edge_population(&self, margin: usize) -> f64 {
        let cutoff = self.m_max.saturating_sub(margin) as i64;
        let m_max = self.m_max as i64;
        self.coefficients
            .iter()
            .enumerate()
            .filter(|(i, _)| (*i as i64 - m_max).abs() >= cutoff)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }
}

/// `<m+1|V|m>` for a field `(E_x, E_y)`; the lowering element is its conjugate.
pub fn raising_coupling(field: [f64; 2], ring: &RingConfig) -> Complex64 {
    let scale = ELECTRON_CHARGE * ring.radius * 0.5;
    Complex64::new(scale * field[0], -scale * field[1])
}

/// `H psi` at time `t` of the schedule. Boundary states couple only inward.
pub fn apply_hamiltonian(
    state: &WaveFunction,
    t: f64,
    ring: &RingConfig,
    schedule: &PulseSchedule,
) -> Result<Vec<Complex64>> {
    let a = state.coefficients();
    if a.len() != ring.dim() {
        return Err(Error::BasisMismatch { expected: ring.dim(), got: a.len() });
    }
    let up = raising_coupling(schedule.field_at(t), ring);
    let down = up.conj();
    let n = a.len();
    let out = (0..n)
        .map(|i| {
            let mut h = a[i] * level_energy(ring.quantum_number(i), ring);
            if i > 0 {
                h += up * a[i - 1];
            }
            if i + 1 < n {
                h += down * a[i + 1];
            }
            h
        })
        .collect();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn baseline_ring() -> RingConfig {
        RingConfig::new(2.7, 8).unwrap()
    }

    #[test]
    fn level_energies_match_reported_values() {
        let ring = baseline_ring();
        assert_eq!(level_energy(0, &ring), 0.0);
        assert_abs_diff_eq!(level_energy_ev(1, &ring), 1.9, epsilon = 0.05);
        let e1 = level_energy_ev(1, &ring);
        assert_abs_diff_eq!(e1, 1.8663, epsilon = 1e-4);
        assert_abs_diff_eq!(level_energy_ev(2, &ring), 4.0 * e1, epsilon = 1e-12);
        assert_abs_diff_eq!(level_energy_ev(3, &ring), 9.0 * e1, epsilon = 1e-12);
    }

    #[test]
    fn quadrupled_radius_divides_energies_by_sixteen() {
        let small = RingConfig::new(2.5, 10).unwrap();
        let big = RingConfig::new(10.0, 10).unwrap();
        for m in -10..=10 {
            assert_eq!(level_energy(m, &small) / 16.0, level_energy(m, &big));
            assert_eq!(level_energy(m, &small), level_energy(-m, &small));
        }
    }

    #[test]
    fn intensity_conversion() {
        assert_eq!(amplitude_from_intensity(ATOMIC_UNIT_INTENSITY_W_CM2), 1.0);
        assert_eq!(amplitude_from_intensity(0.0), 0.0);
        // sqrt(1e14 / 3.50945e16)
        assert_abs_diff_eq!(amplitude_from_intensity(1e14), 0.053_380, epsilon = 5e-6);
    }

    #[test]
    fn ring_rejects_bad_values() {
        assert!(RingConfig::new(0.0, 4).is_err());
        assert!(RingConfig::new(-1.0, 4).is_err());
        assert!(RingConfig::new(2.7, 0).is_err());
        let ring = RingConfig::new(2.7, 3).unwrap();
        assert_eq!(ring.index(-3), Some(0));
        assert_eq!(ring.index(3), Some(6));
        assert_eq!(ring.index(4), None);
        assert_eq!(ring.quantum_number(0), -3);
    }

    #[test]
    fn pulse_validation() {
        assert!(LaserPulse::new(1e14, 2.0, 45.0, 32.0, 2.0).is_ok());
        assert!(LaserPulse::new(-1.0, 2.0, 45.0, 32.0, 2.0).is_err());
        assert!(LaserPulse::new(1e14, 2.0, 91.0, 32.0, 2.0).is_err());
        assert!(LaserPulse::new(1e14, 2.0, 45.0, 3.0, 2.0).is_err());
        assert!(LaserPulse::new(1e14, 0.0, 45.0, 32.0, 2.0).is_err());
        assert!(LaserPulse::new(1e14, 2.0, 45.0, 4.0, 2.0).is_ok());
    }

    #[test]
    fn envelope_is_trapezoid() {
        let p = LaserPulse::new(1e14, 2.0, 0.0, 32.0, 2.0).unwrap();
        let oc = p.period();
        assert_eq!(envelope(0.0, &p), 0.0);
        assert_abs_diff_eq!(envelope(1.0 * oc, &p), 0.5, epsilon = 1e-12);
        assert_eq!(envelope(16.0 * oc, &p), 1.0);
        assert_abs_diff_eq!(envelope(31.0 * oc, &p), 0.5, epsilon = 1e-12);
        assert_eq!(envelope(-1.0, &p), 0.0);
        assert_eq!(envelope(33.0 * oc, &p), 0.0);
    }

    #[test]
    fn field_components_follow_beta() {
        let base = LaserPulse::new(1e14, 2.0, 0.0, 32.0, 2.0).unwrap();
        let oc = base.period();
        for k in 0..50 {
            let t = k as f64 * 0.37 * oc;
            assert_eq!(field_at(t, &base)[1], 0.0);
            let y = base.with_beta(90.0).unwrap();
            assert_abs_diff_eq!(field_at(t, &y)[0], 0.0, epsilon = 1e-16);
        }
        // Circular plateau: both components peak at E0/sqrt(2).
        let circ = base.with_beta(45.0).unwrap();
        let e0 = circ.amplitude();
        let t_x = 16.0 * oc;
        let t_y = 16.25 * oc;
        assert_abs_diff_eq!(field_at(t_x, &circ)[0].abs(), e0 / 2f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(field_at(t_y, &circ)[1].abs(), e0 / 2f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn helicity_flip_negates_y_only() {
        let p = LaserPulse::new(1e14, 2.0, 45.0, 32.0, 2.0).unwrap();
        let q = p.with_helicity(Helicity::Negative);
        for k in 0..200 {
            let t = k as f64 * 1.7;
            let a = field_at(t, &p);
            let b = field_at(t, &q);
            assert_eq!(a[0], b[0]);
            assert_eq!(a[1], -b[1]);
        }
    }

    #[test]
    fn schedule_rejects_mixed_photon_energy() {
        let a = LaserPulse::new(1e14, 2.0, 45.0, 32.0, 2.0).unwrap();
        let b = LaserPulse::new(1e14, 1.0, 45.0, 32.0, 2.0).unwrap();
        assert!(PulseSchedule::new(vec![a, b]).is_err());
        assert!(PulseSchedule::new(vec![]).is_err());
        let s = PulseSchedule::new(vec![a, a]).unwrap();
        assert_eq!(s.segment_starts_oc(), vec![0.0, 32.0]);
        let (_, local) = s.locate(33.0 * a.period()).unwrap();
        assert_abs_diff_eq!(local, a.period(), epsilon = 1e-9);
        assert!(s.locate(64.0 * a.period()).is_none());
    }

    #[test]
    fn free_hamiltonian_is_diagonal() {
        let ring = baseline_ring();
        let off = PulseSchedule::single(LaserPulse::off(2.0, 8.0, 2.0).unwrap());
        let psi = WaveFunction::eigenstate(&ring, 3).unwrap();
        let h = apply_hamiltonian(&psi, 10.0, &ring, &off).unwrap();
        for m in ring.quantum_numbers() {
            let v = h[ring.index(m).unwrap()];
            if m == 3 {
                assert_eq!(v, Complex64::new(level_energy(3, &ring), 0.0));
            } else {
                assert_eq!(v, Complex64::new(0.0, 0.0));
            }
        }
    }

    fn plateau_schedule(beta: f64) -> (PulseSchedule, f64) {
        let p = LaserPulse::new(1e14, 2.0, beta, 8.0, 2.0).unwrap();
        (PulseSchedule::single(p), 4.0 * p.period())
    }

    #[test]
    fn x_drive_couples_ground_symmetrically() {
        let ring = baseline_ring();
        let (s, t) = plateau_schedule(0.0);
        let psi = WaveFunction::ground(&ring);
        let h = apply_hamiltonian(&psi, t, &ring, &s).unwrap();
        let ex = s.field_at(t)[0];
        let plus = h[ring.index(1).unwrap()];
        let minus = h[ring.index(-1).unwrap()];
        // <+-1|cos phi|0> = 1/2
        assert_abs_diff_eq!(plus.re, 0.5 * ring.radius() * ex, epsilon = 1e-15);
        assert_eq!(plus, minus);
        assert_eq!(h[ring.index(2).unwrap()], Complex64::new(0.0, 0.0));
        assert_eq!(h[ring.index(0).unwrap()], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn y_drive_couples_ground_with_opposite_imaginary_parts() {
        let ring = baseline_ring();
        let (s, _) = plateau_schedule(90.0);
        let t = 4.25 * s.period();
        let psi = WaveFunction::ground(&ring);
        let h = apply_hamiltonian(&psi, t, &ring, &s).unwrap();
        let ey = s.field_at(t)[1];
        let plus = h[ring.index(1).unwrap()];
        let minus = h[ring.index(-1).unwrap()];
        // <+-1|sin phi|0> = -+ i/2
        assert_abs_diff_eq!(plus.re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(plus.im, -0.5 * ring.radius() * ey, epsilon = 1e-15);
        assert_abs_diff_eq!(minus.im, 0.5 * ring.radius() * ey, epsilon = 1e-15);
    }

    #[test]
    fn boundary_states_couple_inward_only() {
        let ring = RingConfig::new(2.7, 2).unwrap();
        let (s, t) = plateau_schedule(30.0);
        let top = WaveFunction::eigenstate(&ring, 2).unwrap();
        let h = apply_hamiltonian(&top, t, &ring, &s).unwrap();
        assert_ne!(h[ring.index(1).unwrap()], Complex64::new(0.0, 0.0));
        assert_eq!(h[ring.index(0).unwrap()], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn state_must_match_basis() {
        let ring = baseline_ring();
        let other = RingConfig::new(2.7, 3).unwrap();
        let psi = WaveFunction::ground(&other);
        let (s, t) = plateau_schedule(0.0);
        assert_eq!(
            apply_hamiltonian(&psi, t, &ring, &s),
            Err(Error::BasisMismatch { expected: 17, got: 7 })
        );
    }
}
