// Copyright 2026 PulseForge Contributors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use pulseforge_core::hamiltonian_est::*;
use pulseforge_core::linalg::{dissipator_superop, expm, frobenius, pauli_string, CMatrix};
use pulseforge_core::pulse_ir::Pulse;
use pulseforge_core::simulator::evolve_superoperator;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const J: f64 = 1.87e6;
const LAMBDA: f64 = -271.2e6;
const DELTA: f64 = 115e6;
const ANHARM: f64 = -319.7e6;
const T_CR: f64 = 848.0 * 0.222e-9;

fn random_omega(rng: &mut ChaCha8Rng, scale: f64) -> [f64; 16] {
    let mut w = [0.0; 16];
    for x in w.iter_mut().skip(1) {
        *x = rng.random_range(-scale..scale);
    }
    w
}

fn pauli_dissipator(rng: &mut ChaCha8Rng, scale: f64) -> CMatrix {
    let mut d = CMatrix::zeros(16, 16);
    for k in 1..16 {
        let op = pauli_string(PAULI_PAIRS[k]).unwrap();
        d += dissipator_superop(&op, rng.random_range(0.0..scale));
    }
    d
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn extraction_inverts_construction(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_omega(&mut rng, 2.0 * PI * 5e6);
        let back = extract_coefficients(&build_generator(&w)).unwrap();
        for k in 0..16 {
            prop_assert!((back[k] - w[k]).abs() <= 1e-12 * w[k].abs().max(1.0));
        }
    }

    #[test]
    fn extraction_ignores_pauli_dissipators(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_omega(&mut rng, 2.0 * PI * 5e6);
        let g = build_generator(&w) + pauli_dissipator(&mut rng, 1e5);
        let back = extract_coefficients(&g).unwrap();
        for k in 1..16 {
            prop_assert!((back[k] - w[k]).abs() <= 1e-8 * w[k].abs());
        }
    }

    #[test]
    fn generator_inverts_exponential(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // Every eigenphase difference stays below π/2 over t.
        let t = 100e-9;
        let scale = 0.25 * PI / 2.0 / t / 15.0;
        let s = build_generator(&random_omega(&mut rng, scale)) + pauli_dissipator(&mut rng, 2e5);
        let e = expm(&(&s * Complex64::new(t, 0.0)));
        let g = generator(&e, t).unwrap();
        prop_assert!(frobenius(&(&g - &s)) <= 1e-8 * frobenius(&s));
    }

    #[test]
    fn third_order_fit_is_exact_on_model_data(j in 0.5e6f64..4e6, lambda in -400e6f64..-100e6, n in 4usize..12) {
        let pts: Vec<(f64, f64)> = (1..=n)
            .map(|k| {
                let a = 0.3 * k as f64 / n as f64;
                (a, omega_zx(a, j, lambda, DELTA, ANHARM))
            })
            .collect();
        let fit = fit_third_order(&pts, DELTA, ANHARM).unwrap();
        prop_assert!(fit.residual < 1e-20, "{}", fit.residual);
        prop_assert!((fit.j / j - 1.0).abs() < 1e-6);
    }
}

#[test]
fn hamiltonian_coefficients_use_accumulated_time() {
    let mut w = [0.0; 16];
    w[13] = 2.0 * PI * 1e6;
    let t = 150e-9;
    let e = expm(&(build_generator(&w) * Complex64::new(2.0 * t, 0.0)));
    let h = HamiltonianCoefficients::from_superop(&e, 0.1, t, 2).unwrap();
    assert!((h.zx() - w[13]).abs() < 1e-6 * w[13]);
    assert_eq!(h.get("II"), Some(0.0));
    assert!(h.get("QQ").is_none());
}

#[test]
fn device_constants_recovered_from_synthetic_sweep() {
    let pts: Vec<(f64, f64)> = (1..=12)
        .map(|k| {
            let a = 0.025 * k as f64;
            (a, omega_zx(a, J, LAMBDA, DELTA, ANHARM))
        })
        .collect();
    let fit = fit_third_order(&pts, DELTA, ANHARM).unwrap();
    assert!((fit.j / J - 1.0).abs() < 0.01);
    assert!((fit.lambda / LAMBDA - 1.0).abs() < 0.01);
}

#[test]
fn pi_half_amplitudes_match_reported_operating_points() {
    let pts: Vec<(f64, f64)> = (1..=12)
        .map(|k| {
            let a = 0.025 * k as f64;
            (a, omega_zx(a, J, LAMBDA, DELTA, ANHARM))
        })
        .collect();
    let fit = fit_third_order(&pts, DELTA, ANHARM).unwrap();
    let a1 = solve_pi_half_amplitude(&fit, T_CR, 1).unwrap();
    let a2 = solve_pi_half_amplitude(&fit, T_CR, 2).unwrap();
    assert!((a1 - 0.229).abs() <= 0.019, "{a1}");
    assert!((a2 - 0.098).abs() <= 0.005, "{a2}");
    // The saturating cubic term makes one pulse need more than double the
    // two-pulse amplitude.
    assert!(a2 < a1 / 2.0);
    // Independent check of the root: the accumulated angle is π/2.
    let angle = |a: f64, n: f64| {
        let d = DELTA;
        let q = ANHARM;
        let g = -J * LAMBDA * a / d * (q / (q + d))
            + J * (LAMBDA * a).powi(3) * q * q * (3.0 * q.powi(3) + 11.0 * q * q * d + 15.0 * q * d * d + 9.0 * d.powi(3))
                / (4.0 * d.powi(3) * (q + d).powi(3) * (q + 2.0 * d) * (3.0 * q + 2.0 * d));
        n * 2.0 * PI * g * T_CR
    };
    assert!((angle(a1, 1.0).abs() - PI / 2.0).abs() < 1e-9);
    assert!((angle(a2, 2.0).abs() - PI / 2.0).abs() < 1e-9);
}

#[test]
fn pure_linear_data_leaves_no_cubic_component() {
    let slope = 2.0 * PI * 5e6;
    let noise = 2.0 * PI * 1e3;
    // Noise curves the data either way, exercising the interior optimum
    // and the linear limit.
    for seed in 0..16 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts: Vec<(f64, f64)> = (1..=12)
            .map(|k| {
                let a = 0.025 * k as f64;
                (a, slope * a + rng.random_range(-noise..noise))
            })
            .collect();
        let fit = fit_third_order(&pts, DELTA, ANHARM).unwrap();
        let (lin, cubic) = fit.omega_parts(0.3);
        assert!(cubic.abs() <= 3.0 * noise, "seed {seed}: cubic {cubic}");
        assert!((lin - slope * 0.3).abs() <= 3.0 * noise, "seed {seed}");
    }
}

fn coefficients(dev: &CrDevice, amp: f64, echo: bool) -> HamiltonianCoefficients {
    let backend = dev.backend().unwrap();
    let s = if echo {
        cr2_schedule(dev, amp, -dev.phi0)
    } else {
        cr1_schedule(dev, amp, -dev.phi0)
    }
    .unwrap();
    let sup = evolve_superoperator(&s, &backend).unwrap();
    let a_bar = Pulse::from(cr_pulse(dev, amp, 0.0).unwrap()).mean_amplitude();
    HamiltonianCoefficients::from_superop(&sup, a_bar, dev.t_cr(), if echo { 2 } else { 1 }).unwrap()
}

#[test]
fn echo_suppresses_spurious_terms() {
    let dev = CrDevice::default();
    for amp in [0.1, 0.2] {
        let one = coefficients(&dev, amp, false);
        let two = coefficients(&dev, amp, true);
        for label in ["ZI", "IX", "IY"] {
            let (a, b) = (one.get(label).unwrap().abs(), two.get(label).unwrap().abs());
            assert!(a >= 20.0 * b, "{label} at {amp}: {a} vs {b}");
        }
        // ZX survives the echo.
        assert!((two.zx() / one.zx() - 1.0).abs() < 0.1);
    }
}

#[test]
fn zx_rate_follows_third_order_model() {
    let dev = CrDevice::default();
    let pts: Vec<(f64, f64)> = [0.05, 0.1, 0.15, 0.2]
        .iter()
        .map(|&a| {
            let h = coefficients(&dev, a, false);
            (h.a_bar, h.zx())
        })
        .collect();
    let fit = fit_third_order(&pts, dev.delta, dev.anharm).unwrap();
    // The pulse ramps make Ā an approximation, so the recovery is loose.
    assert!((fit.j * fit.lambda / (dev.j * dev.lambda) - 1.0).abs() < 0.05);
}

#[test]
fn phase_calibration_recovers_hidden_offset() {
    let amps: Vec<f64> = (1..=40).map(|k| 0.005 * k as f64).collect();
    for phi0 in [0.0, 0.3, -0.4] {
        let dev = CrDevice { phi0, ..CrDevice::default() };
        let backend = dev.backend().unwrap();
        let phases: Vec<f64> = (-80..=80).map(|k| 0.01 * k as f64).collect();
        let cal = calibrate_cr_phase(&backend, &dev, &amps, &phases).unwrap();
        assert!((cal.phi_opt + phi0).abs() <= 0.01 + 1e-12, "φ0 {phi0}: {}", cal.phi_opt);
        let [y0, y1] = cal.y_at_opt;
        assert!(y0 * y1 < 0.0 && y0.abs() > 0.9 && y1.abs() > 0.9, "{y0} {y1}");
    }
}

#[test]
fn phase_calibration_reports_missing_crossing() {
    let dev = CrDevice::default();
    let backend = dev.backend().unwrap();
    let err = calibrate_cr_phase(&backend, &dev, &[0.001, 0.002, 0.003], &[0.0]).unwrap_err();
    assert!(matches!(err, pulseforge_core::Error::NoRoot(_)));
}
