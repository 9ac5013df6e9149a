//! Time-dependent Schrodinger equation on the ring.
//!
//! One step of length `dt` is a symmetric split:
//!
//! 1. free phase `exp(-i E_m dt/2)` (exact, diagonal),
//! 2. interaction through a Crank-Nicolson solve of the tridiagonal system
//!    `(1 + i dt/2 V) psi' = (1 - i dt/2 V) psi`, field taken at the step midpoint,
//! 3. free phase again.
//!
//! Each factor is unitary, so the norm only drifts by rounding. Stepping with
//! `-dt` inverts a step exactly.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::observables::{angular_momentum, dipole};
use crate::ring::{
    level_energy, raising_coupling, Helicity, LaserPulse, PulseSchedule, RingConfig, WaveFunction,
};

/// Ramp length used for pump pulses, in optical cycles.
pub const PUMP_RAMP_OC: f64 = 2.0;

/// Smallest `|L_z|` (hbar) a pump must leave behind.
pub const MIN_PUMP_LZ: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Numerics {
    pub steps_per_oc: usize,
    pub samples_per_oc: usize,
    /// Largest tolerated `|norm - 1|` at any sample.
    pub norm_tolerance: f64,
    /// Largest tolerated population in `|m| >= m_max - truncation_margin`;
    /// `None` disables the check.
    pub truncation_tolerance: Option<f64>,
    pub truncation_margin: usize,
    /// Keep a copy of the state at every sample.
    pub record_states: bool,
}

impl Default for Numerics {
    fn default() -> Self {
        Self {
            steps_per_oc: 2048,
            samples_per_oc: 64,
            norm_tolerance: 1e-6,
            truncation_tolerance: Some(1e-8),
            truncation_margin: 2,
            record_states: false,
        }
    }
}

impl Numerics {
    pub fn validate(&self) -> Result<()> {
        if self.steps_per_oc < 256 {
            return Err(Error::InvalidNumerics(format!(
                "steps_per_oc must be >= 256, got {}",
                self.steps_per_oc
            )));
        }
        if self.samples_per_oc == 0 || !self.steps_per_oc.is_multiple_of(self.samples_per_oc) {
            return Err(Error::InvalidNumerics(format!(
                "samples_per_oc ({}) must divide steps_per_oc ({})",
                self.samples_per_oc, self.steps_per_oc
            )));
        }
        Ok(())
    }

    fn stride(&self) -> usize {
        self.steps_per_oc / self.samples_per_oc
    }
}

/// Closed time interval in atomic units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeWindow {
    pub start: f64,
    pub end: f64,
}

impl TimeWindow {
    pub fn new(start: f64, end: f64) -> Self {
        Self { start, end }
    }

    pub fn len(&self) -> f64 {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.start && t <= self.end
    }
}

/// Where one pulse segment sits inside a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegmentSpan {
    pub start: f64,
    pub end: f64,
    pub ramp_oc: f64,
    pub laser_on: bool,
}

impl SegmentSpan {
    /// The segment minus its ramps.
    pub fn plateau(&self, period: f64) -> TimeWindow {
        TimeWindow::new(self.start + self.ramp_oc * period, self.end - self.ramp_oc * period)
    }

    pub fn window(&self) -> TimeWindow {
        TimeWindow::new(self.start, self.end)
    }
}

/// Uniformly sampled record of one propagation.
#[derive(Debug, Clone)]
pub struct Trajectory {
    /// Sample times, a.u.
    pub times: Vec<f64>,
    pub dipole: Vec<[f64; 2]>,
    pub lz: Vec<f64>,
    pub norm: Vec<f64>,
    pub dt_sample: f64,
    /// Optical cycle of the carrier, a.u.
    pub period: f64,
    pub photon_energy: f64,
    pub segments: Vec<SegmentSpan>,
    /// Per-sample states, present when `Numerics::record_states` was set.
    pub states: Option<Vec<WaveFunction>>,
    pub final_state: WaveFunction,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn time_oc(&self, i: usize) -> f64 {
        self.times[i] / self.period
    }

    pub fn span(&self) -> TimeWindow {
        TimeWindow::new(self.times[0], *self.times.last().unwrap())
    }

    /// Total duration `T` of the record.
    pub fn duration(&self) -> f64 {
        self.span().len()
    }

    pub fn final_lz(&self) -> f64 {
        *self.lz.last().unwrap()
    }

    pub fn max_norm_deviation(&self) -> f64 {
        self.norm.iter().map(|n| (n - 1.0).abs()).fold(0.0, f64::max)
    }

    pub fn last_segment(&self) -> &SegmentSpan {
        self.segments.last().unwrap()
    }

    /// Sample indices whose times fall inside `window`.
    pub fn indices_in(&self, window: TimeWindow) -> std::ops::Range<usize> {
        let eps = 1e-9 * self.dt_sample;
        let lo = self.times.partition_point(|&t| t < window.start - eps);
        let hi = self.times.partition_point(|&t| t <= window.end + eps);
        lo..hi.max(lo)
    }

    /// Copy of the samples inside `window`.
    pub fn slice(&self, window: TimeWindow) -> Trajectory {
        let r = self.indices_in(window);
        Trajectory {
            times: self.times[r.clone()].to_vec(),
            dipole: self.dipole[r.clone()].to_vec(),
            lz: self.lz[r.clone()].to_vec(),
            norm: self.norm[r.clone()].to_vec(),
            dt_sample: self.dt_sample,
            period: self.period,
            photon_energy: self.photon_energy,
            segments: self
                .segments
                .iter()
                .filter(|s| s.end > window.start && s.start < window.end)
                .copied()
                .collect(),
            states: self.states.as_ref().map(|s| s[r].to_vec()),
            final_state: self.final_state.clone(),
        }
    }
}

/// Advances a coefficient vector by one split step.
pub struct SplitStepper<'a> {
    ring: &'a RingConfig,
    schedule: &'a PulseSchedule,
    dt: f64,
    half_phase: Vec<Complex64>,
    rhs: Vec<Complex64>,
    c_prime: Vec<Complex64>,
}

impl<'a> SplitStepper<'a> {
    /// `dt` may be negative to step backwards.
    pub fn new(ring: &'a RingConfig, schedule: &'a PulseSchedule, dt: f64) -> Self {
        let half_phase = ring
            .quantum_numbers()
            .map(|m| Complex64::from_polar(1.0, -level_energy(m, ring) * dt * 0.5))
            .collect();
        let n = ring.dim();
        Self {
            ring,
            schedule,
            dt,
            half_phase,
            rhs: vec![Complex64::new(0.0, 0.0); n],
            c_prime: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Moves `psi` from schedule time `tau` to `tau + dt`.
    pub fn step(&mut self, psi: &mut [Complex64], tau: f64) {
        let field = self.schedule.field_at(tau + 0.5 * self.dt);
        for (a, p) in psi.iter_mut().zip(&self.half_phase) {
            *a *= p;
        }
        if field != [0.0, 0.0] {
            self.crank_nicolson(psi, raising_coupling(field, self.ring));
        }
        for (a, p) in psi.iter_mut().zip(&self.half_phase) {
            *a *= p;
        }
    }

    fn crank_nicolson(&mut self, psi: &mut [Complex64], up: Complex64) {
        let n = psi.len();
        let half = Complex64::new(0.0, 0.5 * self.dt);
        // A = 1 + i dt/2 V: sub-diagonal (i, i-1) and super-diagonal (i, i+1)
        let sub = half * up;
        let sup = half * up.conj();
        for i in 0..n {
            let mut v = Complex64::new(0.0, 0.0);
            if i > 0 {
                v += up * psi[i - 1];
            }
            if i + 1 < n {
                v += up.conj() * psi[i + 1];
            }
            self.rhs[i] = psi[i] - half * v;
        }
        // Thomas algorithm, unit diagonal
        self.c_prime[0] = sup;
        psi[0] = self.rhs[0];
        for i in 1..n {
            let den = Complex64::new(1.0, 0.0) - sub * self.c_prime[i - 1];
            self.c_prime[i] = sup / den;
            psi[i] = (self.rhs[i] - sub * psi[i - 1]) / den;
        }
        for i in (0..n - 1).rev() {
            let next = psi[i + 1];
            psi[i] -= self.c_prime[i] * next;
        }
    }
}

fn whole_count(x: f64, what: &str) -> Result<usize> {
    let r = x.round();
    if (x - r).abs() > 1e-6 || r < 0.0 {
        return Err(Error::InvalidNumerics(format!("{what} = {x} is not a whole number")));
    }
    Ok(r as usize)
}

/// Integrates `initial` through `schedule`.
///
/// The trajectory starts at `initial.time()` and samples the state
/// `samples_per_oc` times per optical cycle, endpoints included.
pub fn propagate(
    initial: &WaveFunction,
    schedule: &PulseSchedule,
    ring: &RingConfig,
    numerics: &Numerics,
) -> Result<Trajectory> {
    numerics.validate()?;
    if initial.coefficients().len() != ring.dim() {
        return Err(Error::BasisMismatch { expected: ring.dim(), got: initial.coefficients().len() });
    }
    let dev = (initial.norm_sqr() - 1.0).abs();
    if dev > numerics.norm_tolerance {
        return Err(Error::NormDrift { t_oc: 0.0, deviation: dev });
    }

    let period = schedule.period();
    let stride = numerics.stride();
    let total_steps = whole_count(schedule.duration_oc() * numerics.steps_per_oc as f64, "total steps")?;
    if total_steps % stride != 0 {
        return Err(Error::InvalidNumerics(
            "schedule length is not a whole number of samples".into(),
        ));
    }
    let n_samples = total_steps / stride + 1;
    let dt = period / numerics.steps_per_oc as f64;
    let t0 = initial.time();

    let mut segments = Vec::with_capacity(schedule.segments().len());
    for (seg, start_oc) in schedule.segments().iter().zip(schedule.segment_starts_oc()) {
        segments.push(SegmentSpan {
            start: t0 + start_oc * period,
            end: t0 + (start_oc + seg.duration_oc) * period,
            ramp_oc: seg.ramp_oc,
            laser_on: !seg.is_off(),
        });
    }

    let mut traj = Trajectory {
        times: Vec::with_capacity(n_samples),
        dipole: Vec::with_capacity(n_samples),
        lz: Vec::with_capacity(n_samples),
        norm: Vec::with_capacity(n_samples),
        dt_sample: dt * stride as f64,
        period,
        photon_energy: schedule.photon_energy(),
        segments,
        states: numerics.record_states.then(|| Vec::with_capacity(n_samples)),
        final_state: initial.clone(),
    };

    let mut psi = initial.clone();
    let mut stepper = SplitStepper::new(ring, schedule, dt);
    record(&mut traj, &psi, ring, numerics, t0)?;
    for s in 0..total_steps {
        let tau = s as f64 * dt;
        stepper.step(psi.coefficients_mut(), tau);
        if (s + 1) % stride == 0 {
            let t = t0 + (s + 1) as f64 * dt;
            psi.set_time(t);
            record(&mut traj, &psi, ring, numerics, t)?;
        }
    }
    traj.final_state = psi;
    Ok(traj)
}

fn record(
    traj: &mut Trajectory,
    psi: &WaveFunction,
    ring: &RingConfig,
    numerics: &Numerics,
    t: f64,
) -> Result<()> {
    let norm = psi.norm_sqr();
    let t_oc = t / traj.period;
    let deviation = (norm - 1.0).abs();
    if deviation > numerics.norm_tolerance {
        return Err(Error::NormDrift { t_oc, deviation });
    }
    if let Some(tol) = numerics.truncation_tolerance {
        let population = psi.edge_population(numerics.truncation_margin);
        if population > tol {
            return Err(Error::TruncationPressure { t_oc, population });
        }
    }
    traj.times.push(t);
    traj.dipole.push(dipole(psi, ring));
    traj.lz.push(angular_momentum(psi));
    traj.norm.push(norm);
    if let Some(states) = traj.states.as_mut() {
        states.push(psi.clone());
    }
    Ok(())
}

/// Drives `|0>` with a circular pulse and returns the final state.
///
/// Positive helicity leaves `L_z > 0`. Fails with `PumpFailed` when the pulse
/// leaves less than `MIN_PUMP_LZ` of angular momentum or the wrong sign.
pub fn prepare_pump(
    ring: &RingConfig,
    intensity: f64,
    photon_energy: f64,
    sign: Helicity,
    duration_oc: f64,
    numerics: &Numerics,
) -> Result<WaveFunction> {
    let pulse = LaserPulse::new(intensity, photon_energy, 45.0, duration_oc, PUMP_RAMP_OC)?
        .with_helicity(sign);
    let traj = propagate(&WaveFunction::ground(ring), &PulseSchedule::single(pulse), ring, numerics)?;
    let lz = angular_momentum(&traj.final_state);
    if lz.abs() < MIN_PUMP_LZ || lz.signum() != sign.sign() {
        return Err(Error::PumpFailed { lz });
    }
    Ok(traj.final_state)
}
