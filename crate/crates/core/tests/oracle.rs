//! Split-step propagation against a dense matrix-exponential reference.

use nalgebra::{DMatrix, DVector};
use nanoring_core::propagator::{propagate, Numerics};
use nanoring_core::ring::{level_energy, Helicity, raising_coupling, LaserPulse, PulseSchedule, RingConfig, WaveFunction};
use num_complex::Complex64;

const CHECKPOINTS: usize = 10;
const REFERENCE_DT_OC: f64 = 1e-4;

fn hamiltonian(ring: &RingConfig, field: [f64; 2]) -> DMatrix<Complex64> {
    let n = ring.dim();
    let up = raising_coupling(field, ring);
    DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(level_energy(ring.quantum_number(i), ring), 0.0)
        } else if i == j + 1 {
            up
        } else if j == i + 1 {
            up.conj()
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Populations at `CHECKPOINTS` evenly spaced times, midpoint-field exponential
/// steps of `REFERENCE_DT_OC`.
fn reference_populations(ring: &RingConfig, schedule: &PulseSchedule) -> Vec<Vec<f64>> {
    let period = schedule.period();
    let total = (schedule.duration_oc() / REFERENCE_DT_OC).round() as usize;
    let per_checkpoint = total / CHECKPOINTS;
    let dt = REFERENCE_DT_OC * period;
    let mut psi = DVector::from_fn(ring.dim(), |i, _| {
        Complex64::new(if ring.quantum_number(i) == 0 { 1.0 } else { 0.0 }, 0.0)
    });
    let mut out = Vec::new();
    for s in 0..total {
        let h = hamiltonian(ring, schedule.field_at((s as f64 + 0.5) * dt));
        let u = (h * Complex64::new(0.0, -dt)).exp();
        psi = u * psi;
        if (s + 1) % per_checkpoint == 0 {
            out.push(psi.iter().map(|a| a.norm_sqr()).collect());
        }
    }
    out
}

fn split_step_populations(ring: &RingConfig, schedule: &PulseSchedule, steps_per_oc: usize) -> Vec<Vec<f64>> {
    let samples_per_oc = (CHECKPOINTS as f64 / schedule.duration_oc()).round() as usize;
    let numerics = Numerics {
        steps_per_oc,
        samples_per_oc,
        truncation_tolerance: None,
        record_states: true,
        ..Numerics::default()
    };
    let traj = propagate(&WaveFunction::ground(ring), schedule, ring, &numerics).unwrap();
    traj.states.unwrap()[1..].iter().map(|s| s.populations()).collect()
}

/// The default 2048 misses a 1e-6 match by roughly a factor of eight.
const STEPS_PER_OC: usize = 8192;

fn worst_deviation(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(x, y)| x.iter().zip(y).map(|(p, q)| (p - q).abs()))
        .fold(0.0, f64::max)
}

#[test]
fn matches_dense_exponential_on_smallest_basis() {
    let ring = RingConfig::new(2.7, 2).unwrap();
    for (beta, helicity) in [(30.0, Helicity::Positive), (45.0, Helicity::Negative), (0.0, Helicity::Positive)] {
        let pulse = LaserPulse::new(1e14, 2.0, beta, 5.0, 1.0).unwrap().with_helicity(helicity);
        let schedule = PulseSchedule::single(pulse);
        let reference = reference_populations(&ring, &schedule);
        let ours = split_step_populations(&ring, &schedule, STEPS_PER_OC);
        assert_eq!(ours.len(), CHECKPOINTS);
        assert_eq!(reference.len(), CHECKPOINTS);
        let worst = worst_deviation(&ours, &reference);
        assert!(worst < 1e-6, "beta {beta}: worst population deviation {worst:e}");
    }
}

#[test]
fn error_shrinks_with_step() {
    let ring = RingConfig::new(2.7, 2).unwrap();
    let schedule = PulseSchedule::single(LaserPulse::new(1e14, 2.0, 30.0, 5.0, 1.0).unwrap());
    let reference = reference_populations(&ring, &schedule);
    let coarse = worst_deviation(&split_step_populations(&ring, &schedule, 1024), &reference);
    let fine = worst_deviation(&split_step_populations(&ring, &schedule, 4096), &reference);
    assert!(fine < coarse / 4.0, "coarse {coarse:e}, fine {fine:e}");
}
