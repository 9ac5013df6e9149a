use approx::assert_relative_eq;
use nanoring_core::propagator::{propagate, Numerics, TimeWindow};
use nanoring_core::ring::{ev_to_hartree, LaserPulse, PulseSchedule, RingConfig, WaveFunction};
use nanoring_core::spectral::{cwt, detect_lines, dipole_scalogram, morlet, ScalogramConfig, DEFAULT_THRESHOLD};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

const SIGMA0: f64 = 6.0;

/// Untruncated sum over every sample.
fn brute_force(signal: &[f64], dt: f64, energy_ev: f64, column: usize) -> Complex64 {
    let omega = ev_to_hartree(energy_ev);
    let t = column as f64 * dt;
    let sum: Complex64 = signal
        .iter()
        .enumerate()
        .map(|(j, &s)| morlet(omega * (j as f64 * dt - t), SIGMA0).conj() * s)
        .sum();
    sum * omega.sqrt() * dt
}

fn two_tone(n: usize, dt: f64) -> Vec<f64> {
    let (w1, w2) = (ev_to_hartree(2.0), ev_to_hartree(6.0));
    (0..n).map(|j| (w1 * j as f64 * dt).cos() + 0.3 * (w2 * j as f64 * dt + 0.4).sin()).collect()
}

fn period() -> f64 {
    2.0 * PI / ev_to_hartree(2.0)
}

#[test]
fn agrees_with_untruncated_sum() {
    let dt = period() / 64.0;
    let signal = two_tone(64 * 30, dt);
    let energies = [0.5, 2.0, 3.1, 6.0, 9.0];
    let columns = [0, 333, 960, 1500, signal.len() - 1];
    let grid = cwt(&signal, dt, &energies, SIGMA0, &columns).unwrap();
    for (r, &e) in energies.iter().enumerate() {
        for (c, &col) in columns.iter().enumerate() {
            let expected = brute_force(&signal, dt, e, col);
            let got = grid.at(r, c);
            assert!((got - expected).norm() <= 1e-10 * (1.0 + expected.norm()), "E {e}, col {col}: {got} vs {expected}");
        }
    }
}

#[test]
fn is_linear() {
    let dt = period() / 64.0;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let a: Vec<f64> = (0..1024).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let b: Vec<f64> = (0..1024).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let (ka, kb) = (2.5, -0.75);
    let mix: Vec<f64> = a.iter().zip(&b).map(|(x, y)| ka * x + kb * y).collect();
    let energies = [1.0, 2.0, 4.0];
    let columns: Vec<usize> = (0..1024).step_by(37).collect();
    let wa = cwt(&a, dt, &energies, SIGMA0, &columns).unwrap();
    let wb = cwt(&b, dt, &energies, SIGMA0, &columns).unwrap();
    let wm = cwt(&mix, dt, &energies, SIGMA0, &columns).unwrap();
    for i in 0..wm.data.len() {
        let expected = wa.data[i] * ka + wb.data[i] * kb;
        assert!((wm.data[i] - expected).norm() < 1e-12 * (1.0 + expected.norm()));
    }
}

#[test]
fn two_tone_plateau_magnitudes() {
    let dt = period() / 64.0;
    let signal = two_tone(64 * 40, dt);
    let grid = cwt(&signal, dt, &[2.0, 6.0], SIGMA0, &[20 * 64]).unwrap();
    let expected = |e: f64, amp: f64| amp * amp * PI * SIGMA0 * SIGMA0 / (2.0 * ev_to_hartree(e));
    assert_relative_eq!(grid.at(0, 0).norm_sqr(), expected(2.0, 1.0), max_relative = 1e-3);
    assert_relative_eq!(grid.at(1, 0).norm_sqr(), expected(6.0, 0.3), max_relative = 1e-2);
}

#[test]
fn shifting_the_signal_shifts_the_transform() {
    let dt = period() / 64.0;
    let signal = two_tone(3000, dt);
    let shift = 200;
    let shifted: Vec<f64> = std::iter::repeat_n(0.0, shift).chain(signal.iter().copied()).collect();
    let a = cwt(&signal, dt, &[2.0, 5.0], SIGMA0, &[1200]).unwrap();
    let b = cwt(&shifted, dt, &[2.0, 5.0], SIGMA0, &[1200 + shift]).unwrap();
    for i in 0..2 {
        assert!((a.data[i] - b.data[i]).norm() < 1e-12 * (1.0 + a.data[i].norm()));
    }
}

#[test]
fn line_detection_ignores_overall_dipole_scale() {
    let ring = RingConfig::new(2.7, 16).unwrap();
    let schedule = PulseSchedule::single(LaserPulse::new(1e14, 2.0, 45.0, 12.0, 2.0).unwrap());
    let traj = propagate(&WaveFunction::ground(&ring), &schedule, &ring, &Numerics::default()).unwrap();
    let seg = *traj.last_segment();
    let config = ScalogramConfig::for_photon_energy(2.0);
    let scan = |k: f64| {
        let mut scaled = traj.clone();
        scaled.dipole.iter_mut().for_each(|d| *d = [k * d[0], k * d[1]]);
        let s = dipole_scalogram(&scaled, seg.window(), seg.plateau(traj.period), &config).unwrap();
        detect_lines(&s, &ring, 2.0, DEFAULT_THRESHOLD).unwrap()
    };
    let base = scan(1.0);
    for k in [1e-3, 7.0, 1e5] {
        let other = scan(k);
        for (a, b) in base.lines.iter().zip(&other.lines) {
            assert_eq!(a.present, b.present);
            assert_relative_eq!(b.power, k * k * a.power, max_relative = 1e-9);
        }
    }
    let whole = TimeWindow::new(seg.start, seg.end);
    assert_eq!(whole, seg.window());
}
