// Copyright 2026 PulseForge Contributors
// SPDX-License-Identifier: Apache-2.0

//! Two-qubit cross-resonance device model and CR pulse sequences.
//!
//! Qubit 1 is the control, qubit 0 the target. The CR tone plays on `u1`,
//! whose frame follows qubit 0. A drive value `c` on `u1` produces
//!
//! ```text
//! H_CR = Re(c e^{iφ₀})·(a₁ ZX + e IX_ψ) + Im(c e^{iφ₀})·(a₁ ZY + e IY_ψ)
//!        + |c|²·s ZI + |c|² (Re(c e^{iφ₀}) a₃ ZX + Im(c e^{iφ₀}) a₃ ZY)
//! ```
//!
//! with `IX_ψ = cos ψ IX + sin ψ IY` and `IY_ψ = −sin ψ IX + cos ψ IY`.
//! The linear and cubic ZX rates follow the third-order model, `φ₀` is a
//! line phase offset hidden from the pulse program.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::third_order::omega_zx;
use crate::error::{Error, Result};
use crate::linalg::{pauli_string, CMatrix};
use crate::pulse_ir::json::pulse_to_wire;
use crate::pulse_ir::{ChannelId, Instruction, ParametricPulse, Schedule};
use crate::simulator::{
    simulate, BackendModel, BackendSpec, CalibrationSpec, ChannelSpec, DissipatorSpec, MeasureCalSpec, QubitCalSpec,
    ReadoutSpec,
};
use crate::wire::{cplx, F64};

/// Parameters of the simulated two-qubit CR device. Frequencies in Hz,
/// rates in rad/s, times in seconds. Missing JSON fields take the
/// defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CrDevice {
    pub dt: f64,
    /// Target (qubit 0) frequency.
    pub f0: f64,
    /// Control minus target frequency, `Δ`.
    pub delta: f64,
    /// Control anharmonicity `δ₁`.
    pub anharm: f64,
    /// Coupling `J`.
    pub j: f64,
    /// Drive strength per unit amplitude `λ`.
    pub lambda: f64,
    /// Hidden line phase `φ₀` of the CR tone.
    pub phi0: f64,
    /// IX-type crosstalk rate per unit amplitude.
    pub crosstalk: f64,
    /// Crosstalk phase `ψ`.
    pub crosstalk_phase: f64,
    /// ZI Stark shift per squared amplitude.
    pub stark: f64,
    /// Static `ω_ZZ`.
    pub zz: f64,
    /// Single-qubit Rabi rate per unit amplitude.
    pub rabi: f64,
    pub t1: [f64; 2],
    pub t2: [f64; 2],
    /// CR GaussianSquare duration, rise sigma and flat width in cycles.
    pub cr_duration: u64,
    pub cr_sigma: f64,
    pub cr_width: u64,
    /// Single-qubit Gaussian duration and sigma in cycles.
    pub x_duration: u64,
    pub x_sigma: f64,
    pub measure_duration: u64,
}

impl Default for CrDevice {
    fn default() -> Self {
        Self {
            dt: 0.222e-9,
            f0: 4.857e9,
            delta: 115e6,
            anharm: -319.7e6,
            j: 1.87e6,
            lambda: -271.2e6,
            phi0: 0.166,
            crosstalk: 2.0 * PI * 2.0e6,
            crosstalk_phase: 0.5,
            stark: 2.0 * PI * 15.0e6,
            zz: 2.0 * PI * 5e3,
            rabi: 2.0 * PI * 120e6,
            t1: [60e-6, 60e-6],
            t2: [50e-6, 50e-6],
            cr_duration: 848,
            cr_sigma: 32.0,
            cr_width: 720,
            x_duration: 160,
            x_sigma: 40.0,
            measure_duration: 1000,
        }
    }
}

fn term(coeff: f64, op: &str) -> String {
    format!("{:+.17e}*{op}", coeff)
}

fn sum(terms: &[(f64, &str)]) -> String {
    let s: Vec<String> = terms.iter().filter(|(c, _)| *c != 0.0).map(|(c, o)| term(*c, o)).collect();
    if s.is_empty() {
        "0*II".into()
    } else {
        s.join(" ")
    }
}

impl CrDevice {
    /// Linear and cubic ZX rates per unit amplitude: `ω_ZX = a₁ A + a₃ A³`.
    pub fn zx_rates(&self) -> (f64, f64) {
        let w1 = omega_zx(1.0, self.j, self.lambda, self.delta, self.anharm);
        let lin = omega_zx(1e-9, self.j, self.lambda, self.delta, self.anharm) * 1e9;
        (lin, w1 - lin)
    }

    fn gaussian_area(&self) -> f64 {
        let g = ParametricPulse::gaussian(self.x_duration, Complex64::new(1.0, 0.0), self.x_sigma).expect("valid shape");
        g.sample().samples().iter().map(|z| z.re).sum()
    }

    /// Resonant π pulse for either qubit.
    pub fn x_pulse(&self) -> ParametricPulse {
        let amp = PI / (self.rabi * self.dt * self.gaussian_area());
        ParametricPulse::gaussian(self.x_duration, Complex64::new(amp, 0.0), self.x_sigma).expect("amplitude below one")
    }

    pub fn sx_pulse(&self) -> ParametricPulse {
        let amp = PI / 2.0 / (self.rabi * self.dt * self.gaussian_area());
        ParametricPulse::gaussian(self.x_duration, Complex64::new(amp, 0.0), self.x_sigma).expect("amplitude below one")
    }

    pub fn t_cr(&self) -> f64 {
        self.cr_duration as f64 * self.dt
    }

    pub fn backend_spec(&self) -> BackendSpec {
        let (a1, a3) = self.zx_rates();
        // H = ω/2 · P for each Pauli term.
        let (c0, s0) = (self.phi0.cos(), self.phi0.sin());
        let (cx, sx) = ((self.phi0 + self.crosstalk_phase).cos(), (self.phi0 + self.crosstalk_phase).sin());
        let h = |x: f64| x / 2.0;
        let u1 = ChannelSpec {
            frequency: F64(self.f0),
            frame_frequency: None,
            i: Some(sum(&[
                (h(a1 * c0), "ZX"),
                (h(a1 * s0), "ZY"),
                (h(self.crosstalk * cx), "IX"),
                (h(self.crosstalk * sx), "IY"),
            ])),
            q: Some(sum(&[
                (h(-a1 * s0), "ZX"),
                (h(a1 * c0), "ZY"),
                (h(-self.crosstalk * sx), "IX"),
                (h(self.crosstalk * cx), "IY"),
            ])),
            abs2: Some(sum(&[(h(self.stark), "ZI")])),
            abs2_i: Some(sum(&[(h(a3 * c0), "ZX"), (h(a3 * s0), "ZY")])),
            abs2_q: Some(sum(&[(h(-a3 * s0), "ZX"), (h(a3 * c0), "ZY")])),
        };
        let drive = |f: f64, x: &str, y: &str| ChannelSpec {
            frequency: F64(f),
            frame_frequency: None,
            i: Some(sum(&[(h(self.rabi), x)])),
            q: Some(sum(&[(h(self.rabi), y)])),
            abs2: None,
            abs2_i: None,
            abs2_q: None,
        };
        let mut channels = std::collections::BTreeMap::new();
        channels.insert(ChannelId::drive(0), drive(self.f0, "IX", "IY"));
        channels.insert(ChannelId::drive(1), drive(self.f0 + self.delta, "XI", "YI"));
        channels.insert(ChannelId::control(1), u1);

        let mut dissipators = Vec::new();
        for q in 0..2 {
            let (lx, ly, lz) = if q == 0 { ("IX", "IY", "IZ") } else { ("XI", "YI", "ZI") };
            let t1 = self.t1[q];
            let t2 = self.t2[q];
            dissipators.push(DissipatorSpec {
                op: format!("0.5*{lx} + 0.5*j*{ly}"),
                rate: F64(1.0 / t1),
            });
            let dephase = 1.0 / t2 - 1.0 / (2.0 * t1);
            if dephase > 0.0 {
                // D[Z] at rate γ decays coherences at 2γ.
                dissipators.push(DissipatorSpec {
                    op: lz.into(),
                    rate: F64(dephase / 2.0),
                });
            }
        }
        let readout = vec![
            ReadoutSpec {
                mean0: cplx(Complex64::new(0.9, -0.2)),
                mean1: cplx(Complex64::new(-0.5, 0.8)),
                cov0: [[F64(0.06), F64(0.01)], [F64(0.01), F64(0.05)]],
                cov1: [[F64(0.07), F64(-0.01)], [F64(-0.01), F64(0.06)]],
            },
            ReadoutSpec {
                mean0: cplx(Complex64::new(-0.7, -0.6)),
                mean1: cplx(Complex64::new(0.6, 0.5)),
                cov0: [[F64(0.05), F64(0.0)], [F64(0.0), F64(0.06)]],
                cov1: [[F64(0.06), F64(0.01)], [F64(0.01), F64(0.07)]],
            },
        ];
        let x = pulse_to_wire(&self.x_pulse().into());
        let sxp = pulse_to_wire(&self.sx_pulse().into());
        let measure = ParametricPulse::constant(self.measure_duration, Complex64::new(0.2, 0.0)).expect("valid");
        BackendSpec {
            dt: F64(self.dt),
            n_qubits: 2,
            rwa: true,
            h_sys: sum(&[(h(self.zz), "ZZ")]),
            channels,
            dissipators,
            readout,
            discriminators: None,
            frame_tracking: [(ChannelId::control(1), 0)].into_iter().collect(),
            calibrations: Some(CalibrationSpec {
                qubits: vec![
                    QubitCalSpec {
                        x: x.clone(),
                        sx: sxp.clone(),
                    },
                    QubitCalSpec { x, sx: sxp },
                ],
                measure: MeasureCalSpec {
                    pulse: pulse_to_wire(&measure.into()),
                    acquire: self.measure_duration,
                },
            }),
        }
    }

    pub fn backend(&self) -> Result<BackendModel> {
        BackendModel::from_spec(&self.backend_spec())
    }
}

/// CR GaussianSquare with complex amplitude `amp·e^{iφ}`.
pub fn cr_pulse(device: &CrDevice, amp: f64, phase: f64) -> Result<ParametricPulse> {
    ParametricPulse::gaussian_square(
        device.cr_duration,
        Complex64::from_polar(amp, phase),
        device.cr_sigma,
        device.cr_width,
    )
}

/// One CR pulse on `u1`.
pub fn cr1_schedule(device: &CrDevice, amp: f64, phase: f64) -> Result<Schedule> {
    Schedule::new("cr1").append(Instruction::play(cr_pulse(device, amp, phase)?, ChannelId::control(1))?)
}

/// Echoed CR: `CR(+A) · X_c · CR(−A) · X_c` in time order.
pub fn cr2_schedule(device: &CrDevice, amp: f64, phase: f64) -> Result<Schedule> {
    let u = ChannelId::control(1);
    let d1 = ChannelId::drive(1);
    let tc = device.cr_duration;
    let tx = device.x_duration;
    let x = device.x_pulse();
    Schedule::new("cr2")
        .insert(0, Instruction::play(cr_pulse(device, amp, phase)?, u)?)?
        .insert(tc, Instruction::play(x.clone(), d1)?)?
        .insert(tc + tx, Instruction::play(cr_pulse(device, -amp, phase)?, u)?)?
        .insert(2 * tc + tx, Instruction::play(x, d1)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub phi: f64,
    /// Target `⟨Y⟩` with the control in |0⟩ and in |1⟩.
    pub y0: f64,
    pub y1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseCalibration {
    pub a_opt: f64,
    pub phi_opt: f64,
    /// Stage 1: target `⟨Z⟩` from |00⟩ per amplitude.
    pub amplitude_sweep: Vec<(f64, f64)>,
    /// Stage 2 at `a_opt`.
    pub phase_sweep: Vec<PhasePoint>,
    /// Target `⟨Y⟩` at `phi_opt` for control |0⟩ and |1⟩.
    pub y_at_opt: [f64; 2],
}

fn expectation(rho: &CMatrix, pauli: &str) -> f64 {
    let p = pauli_string(pauli).expect("static label");
    (p * rho).trace().re
}

/// Two-stage CR phase calibration on the echoed sequence.
///
/// Stage 1 sweeps the amplitude at zero phase from |00⟩ and takes the
/// first zero crossing of the target `⟨Z⟩` by linear interpolation.
/// Stage 2 sweeps the phase at that amplitude, measures the target `⟨Y⟩`
/// for both control states and returns the phase maximizing the mean
/// `|⟨Y⟩|`. Expectations are exact (no shot noise).
pub fn calibrate_cr_phase(
    backend: &BackendModel,
    device: &CrDevice,
    amplitudes: &[f64],
    phases: &[f64],
) -> Result<PhaseCalibration> {
    if amplitudes.len() < 2 || phases.is_empty() {
        return Err(Error::InvalidData("need at least two amplitudes and one phase".into()));
    }
    let z: Vec<f64> = amplitudes
        .par_iter()
        .map(|&a| {
            let r = simulate(&cr2_schedule(device, a, 0.0)?, backend, 0, 0)?;
            Ok(expectation(&r.rho, "IZ"))
        })
        .collect::<Result<_>>()?;
    let mut a_opt = None;
    for k in 1..amplitudes.len() {
        let (z0, z1) = (z[k - 1], z[k]);
        if z0 == 0.0 {
            a_opt = Some(amplitudes[k - 1]);
            break;
        }
        if z0.signum() != z1.signum() {
            let (a0, a1) = (amplitudes[k - 1], amplitudes[k]);
            a_opt = Some(a0 + (a1 - a0) * z0 / (z0 - z1));
            break;
        }
    }
    let a_opt = a_opt.ok_or_else(|| Error::NoRoot("target ⟨Z⟩ has no zero crossing in the amplitude sweep".into()))?;

    let prep_one = Schedule::new("x1").append(Instruction::play(device.x_pulse(), ChannelId::drive(1))?)?;
    let sweep: Vec<PhasePoint> = phases
        .par_iter()
        .map(|&phi| {
            let cr = cr2_schedule(device, a_opt, phi)?;
            let r0 = simulate(&cr, backend, 0, 0)?;
            let with_one = prep_one.insert_schedule(device.x_duration, &cr)?;
            let r1 = simulate(&with_one, backend, 0, 0)?;
            Ok(PhasePoint {
                phi,
                y0: expectation(&r0.rho, "IY"),
                y1: expectation(&r1.rho, "IY"),
            })
        })
        .collect::<Result<_>>()?;
    let score = |p: &PhasePoint| 0.5 * (p.y0.abs() + p.y1.abs());
    let best = sweep
        .iter()
        .fold(None::<&PhasePoint>, |acc, p| match acc {
            Some(b) if score(b) >= score(p) => Some(b),
            _ => Some(p),
        })
        .expect("non-empty sweep");
    Ok(PhaseCalibration {
        a_opt,
        phi_opt: best.phi,
        amplitude_sweep: amplitudes.iter().copied().zip(z).collect(),
        y_at_opt: [best.y0, best.y1],
        phase_sweep: sweep,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn device_compiles_and_x_is_pi() {
        let d = CrDevice::default();
        let b = d.backend().unwrap();
        let s = Schedule::new("x").append(Instruction::play(d.x_pulse(), ChannelId::drive(0)).unwrap()).unwrap();
        let r = simulate(&s, &b, 0, 0).unwrap();
        // Decoherence over ~36 ns costs well under 1e-3.
        assert!(r.rho[(1, 1)].re > 0.999, "{}", r.rho[(1, 1)].re);
    }

    #[test]
    fn echo_schedule_layout() {
        let d = CrDevice::default();
        let s = cr2_schedule(&d, 0.1, 0.0).unwrap();
        assert_eq!(s.duration(), 2 * (848 + 160));
        assert_eq!(s.entries().len(), 4);
    }
}
