// Copyright 2026 PulseForge Contributors
// SPDX-License-Identifier: Apache-2.0

//! Deterministic fixtures shared by the benchmarks in `benches/`.

use num_complex::Complex64;
use pulseforge_core::hamiltonian_est::{cr1_schedule, CrDevice};
use pulseforge_core::linalg::{c, CMatrix};
use pulseforge_core::simulator::evolve_superoperator;
use pulseforge_core::{ChannelId, Instruction, ParametricPulse, Result, Schedule};

/// `n` Gaussian pulses on `d0`, each preceded by a frame shift.
pub fn pulse_train(n: usize) -> Result<Schedule> {
    let d0 = ChannelId::drive(0);
    let mut s = Schedule::new("train");
    for k in 0..n {
        s = s.append(Instruction::shift_phase(0.1 * k as f64, d0)?)?;
        s = s.append(Instruction::play(ParametricPulse::gaussian(160, c(0.2, 0.05), 40.0)?, d0)?)?;
    }
    Ok(s)
}

/// Single cross-resonance pulse on the default device at amplitude `amp`.
pub fn cr_schedule(amp: f64) -> Result<(CrDevice, Schedule)> {
    let dev = CrDevice::default();
    let s = cr1_schedule(&dev, amp, -dev.phi0)?;
    Ok((dev, s))
}

/// Two-qubit superoperator of the default cross-resonance pulse.
pub fn cr_channel(amp: f64) -> Result<CMatrix> {
    let (dev, s) = cr_schedule(amp)?;
    evolve_superoperator(&s, &dev.backend()?)
}

/// Two labelled IQ clusters on a fixed low-discrepancy lattice.
pub fn iq_clusters(n: usize) -> Vec<(Complex64, u8)> {
    let golden = 0.618_033_988_749_894_9;
    (0..2 * n)
        .map(|k| {
            let label = (k % 2) as u8;
            let u = (k as f64 * golden).fract() * std::f64::consts::TAU;
            let r = 0.4 * ((k as f64 * 0.754_877_666).fract() + 0.05).sqrt();
            let centre = if label == 0 { c(-1.0, 0.2) } else { c(0.8, -0.3) };
            (centre + Complex64::from_polar(r, u), label)
        })
        .collect()
}
