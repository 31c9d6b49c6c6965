// Copyright 2026 PulseForge Contributors
// SPDX-License-Identifier: Apache-2.0

//! Backend model: system Hamiltonian, channel bindings, noise and readout
//! statistics.
//!
//! Hamiltonians are in rad/s. A bound channel with complex control value
//! `c` (after carrier modulation) contributes
//!
//! ```text
//! Re(c)·H_I + Im(c)·H_Q + |c|²·H_abs2 + |c|²Re(c)·H_abs2_I + |c|²Im(c)·H_abs2_Q
//! ```
//!
//! With the rotating-wave flag set, `c` is modulated at the detuning
//! `frequency − frame_frequency`. Without it, `c` is the real lab-frame
//! output `D` and only the `H_I`, `H_abs2` and `H_abs2_I` terms apply.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::expr::parse_operator;
use crate::error::{Error, Result};
use crate::linalg::{frobenius, CMatrix};
use crate::pulse_ir::json::{pulse_from_wire, PulseWire};
use crate::pulse_ir::{ChannelId, ChannelKind, Instruction, Pulse, Schedule};
use crate::readout::LinearDiscriminator;
use crate::scheduler::{InstructionScheduleMap, Template};
use crate::wire::{from_cplx, Cplx, F64};

pub type Cov2 = [[f64; 2]; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSpec {
    pub frequency: F64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame_frequency: Option<F64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub i: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abs2: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abs2_i: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abs2_q: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DissipatorSpec {
    pub op: String,
    pub rate: F64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReadoutSpec {
    pub mean0: Cplx,
    pub mean1: Cplx,
    pub cov0: [[F64; 2]; 2],
    pub cov1: [[F64; 2]; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiscriminatorSpec {
    pub w: [F64; 2],
    pub b: F64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QubitCalSpec {
    pub x: PulseWire,
    pub sx: PulseWire,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureCalSpec {
    pub pulse: PulseWire,
    pub acquire: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrationSpec {
    pub qubits: Vec<QubitCalSpec>,
    pub measure: MeasureCalSpec,
}

fn default_true() -> bool {
    true
}

/// Serializable backend description; compile with [`BackendModel::from_spec`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BackendSpec {
    pub dt: F64,
    pub n_qubits: usize,
    #[serde(default = "default_true")]
    pub rwa: bool,
    pub h_sys: String,
    pub channels: BTreeMap<ChannelId, ChannelSpec>,
    #[serde(default)]
    pub dissipators: Vec<DissipatorSpec>,
    pub readout: Vec<ReadoutSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discriminators: Option<Vec<DiscriminatorSpec>>,
    /// Control channels whose frame follows a qubit's virtual Z gates.
    #[serde(default)]
    pub frame_tracking: BTreeMap<ChannelId, u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub calibrations: Option<CalibrationSpec>,
}

impl BackendSpec {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("backend serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelTerms {
    pub frequency: f64,
    pub frame_frequency: f64,
    pub h_i: Option<CMatrix>,
    pub h_q: Option<CMatrix>,
    pub h_abs2: Option<CMatrix>,
    pub h_abs2_i: Option<CMatrix>,
    pub h_abs2_q: Option<CMatrix>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitReadout {
    pub mean: [Complex64; 2],
    pub cov: [Cov2; 2],
}

#[derive(Debug, Clone, PartialEq)]
pub struct Calibrations {
    pub x: Vec<Pulse>,
    pub sx: Vec<Pulse>,
    pub measure: Pulse,
    pub acquire: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BackendModel {
    pub dt: f64,
    pub n_qubits: usize,
    pub rwa: bool,
    pub h_sys: CMatrix,
    pub channels: BTreeMap<ChannelId, ChannelTerms>,
    pub dissipators: Vec<(CMatrix, f64)>,
    pub readout: Vec<QubitReadout>,
    pub discriminators: Vec<LinearDiscriminator>,
    pub frame_tracking: BTreeMap<ChannelId, u32>,
    pub calibrations: Option<Calibrations>,
}

fn check_hermitian(name: &str, m: &CMatrix) -> Result<()> {
    let tol = 1e-12 * frobenius(m).max(1.0);
    if frobenius(&(m - m.adjoint())) > tol {
        return Err(Error::InvalidBackend(format!("{name} is not Hermitian")));
    }
    Ok(())
}

fn cov_of(c: &[[F64; 2]; 2]) -> Cov2 {
    [[c[0][0].0, c[0][1].0], [c[1][0].0, c[1][1].0]]
}

fn check_cov(name: &str, c: &Cov2) -> Result<()> {
    let sym = (c[0][1] - c[1][0]).abs() <= 1e-12 * (c[0][0].abs() + c[1][1].abs()).max(1e-300);
    let det = c[0][0] * c[1][1] - c[0][1] * c[1][0];
    let tol = 1e-12 * (c[0][0].abs() + c[1][1].abs()).powi(2);
    if !sym || c[0][0] < 0.0 || c[1][1] < 0.0 || det < -tol || c.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::InvalidBackend(format!("{name} is not a PSD covariance")));
    }
    Ok(())
}

impl BackendModel {
    pub fn from_spec(spec: &BackendSpec) -> Result<Self> {
        let n = spec.n_qubits;
        if !(1..=3).contains(&n) {
            return Err(Error::InvalidBackend(format!("n_qubits must be 1..=3, got {n}")));
        }
        let dt = spec.dt.0;
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidBackend("dt must be positive".into()));
        }
        let h_sys = parse_operator(&spec.h_sys, n)?;
        check_hermitian("h_sys", &h_sys)?;

        let mut channels = BTreeMap::new();
        for (ch, c) in &spec.channels {
            if !matches!(ch.kind, ChannelKind::Drive | ChannelKind::Control) {
                return Err(Error::InvalidBackend(format!("only drive and control channels can be bound, got {ch}")));
            }
            let term = |e: &Option<String>, what: &str| -> Result<Option<CMatrix>> {
                match e {
                    None => Ok(None),
                    Some(src) => {
                        let m = parse_operator(src, n)?;
                        check_hermitian(&format!("{ch}.{what}"), &m)?;
                        Ok(Some(m))
                    }
                }
            };
            let f = c.frequency.0;
            let ff = c.frame_frequency.map(|x| x.0).unwrap_or(f);
            if !f.is_finite() || !ff.is_finite() {
                return Err(Error::InvalidBackend(format!("{ch} frequency is not finite")));
            }
            channels.insert(
                *ch,
                ChannelTerms {
                    frequency: f,
                    frame_frequency: ff,
                    h_i: term(&c.i, "i")?,
                    h_q: term(&c.q, "q")?,
                    h_abs2: term(&c.abs2, "abs2")?,
                    h_abs2_i: term(&c.abs2_i, "abs2_i")?,
                    h_abs2_q: term(&c.abs2_q, "abs2_q")?,
                },
            );
        }

        let mut dissipators = Vec::new();
        for d in &spec.dissipators {
            let rate = d.rate.0;
            if !(rate.is_finite() && rate >= 0.0) {
                return Err(Error::InvalidBackend(format!("dissipator rate {rate} must be ≥ 0")));
            }
            dissipators.push((parse_operator(&d.op, n)?, rate));
        }

        if spec.readout.len() != n {
            return Err(Error::InvalidBackend(format!("need readout statistics for {n} qubits")));
        }
        let mut readout = Vec::new();
        for (q, r) in spec.readout.iter().enumerate() {
            let cov = [cov_of(&r.cov0), cov_of(&r.cov1)];
            check_cov(&format!("readout[{q}].cov0"), &cov[0])?;
            check_cov(&format!("readout[{q}].cov1"), &cov[1])?;
            readout.push(QubitReadout {
                mean: [from_cplx(&r.mean0), from_cplx(&r.mean1)],
                cov,
            });
        }
        let discriminators = match &spec.discriminators {
            Some(ds) => {
                if ds.len() != n {
                    return Err(Error::InvalidBackend(format!("need {n} discriminators")));
                }
                ds.iter()
                    .zip(&readout)
                    .map(|(d, r)| LinearDiscriminator {
                        w: [d.w[0].0, d.w[1].0],
                        b: d.b.0,
                        means: [[r.mean[0].re, r.mean[0].im], [r.mean[1].re, r.mean[1].im]],
                        covariance: r.cov[0],
                    })
                    .collect()
            }
            None => readout
                .iter()
                .map(|r| LinearDiscriminator::from_gaussians(r.mean[0], r.mean[1], r.cov[0], r.cov[1]))
                .collect::<Result<Vec<_>>>()?,
        };

        for (ch, q) in &spec.frame_tracking {
            if ch.kind != ChannelKind::Control || *q as usize >= n {
                return Err(Error::InvalidBackend(format!("bad frame tracking entry {ch} -> {q}")));
            }
        }

        let calibrations = match &spec.calibrations {
            None => None,
            Some(c) => {
                if c.qubits.len() != n {
                    return Err(Error::InvalidBackend(format!("need calibrations for {n} qubits")));
                }
                Some(Calibrations {
                    x: c.qubits.iter().map(|q| pulse_from_wire(&q.x)).collect::<Result<_>>()?,
                    sx: c.qubits.iter().map(|q| pulse_from_wire(&q.sx)).collect::<Result<_>>()?,
                    measure: pulse_from_wire(&c.measure.pulse)?,
                    acquire: c.measure.acquire,
                })
            }
        };

        Ok(Self {
            dt,
            n_qubits: n,
            rwa: spec.rwa,
            h_sys,
            channels,
            dissipators,
            readout,
            discriminators,
            frame_tracking: spec.frame_tracking.clone(),
            calibrations,
        })
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn is_unitary(&self) -> bool {
        self.dissipators.iter().all(|(_, r)| *r == 0.0)
    }

    /// Channels whose frame carries qubit `q`'s virtual Z: `d_q` plus every
    /// control channel tracking `q`.
    pub fn frames_for(&self, q: u32) -> Vec<ChannelId> {
        let mut v = vec![ChannelId::drive(q)];
        v.extend(self.frame_tracking.iter().filter(|(_, t)| **t == q).map(|(c, _)| *c));
        v
    }

    /// Initial frame frequencies for codegen: the detuning under the
    /// rotating-wave flag, the lab frequency otherwise. Unbound measure
    /// channels get zero.
    pub fn codegen_frequencies(&self, schedule: &Schedule) -> BTreeMap<ChannelId, f64> {
        let mut f = BTreeMap::new();
        for ch in schedule.channels() {
            if let Some(t) = self.channels.get(&ch) {
                f.insert(ch, if self.rwa { t.frequency - t.frame_frequency } else { t.frequency });
            } else if ch.is_pulse() {
                f.insert(ch, 0.0);
            }
        }
        f
    }

    /// Default gate map from the calibrations: `x`, `sx`, `id`, `rz`, `u3`
    /// and `measure` on every qubit.
    pub fn default_instmap(&self) -> Result<InstructionScheduleMap> {
        let cal = self
            .calibrations
            .as_ref()
            .ok_or_else(|| Error::InvalidBackend("backend has no calibrations".into()))?;
        let mut m = InstructionScheduleMap::new();
        for q in 0..self.n_qubits as u32 {
            let d = ChannelId::drive(q);
            let play = |p: &Pulse, name: &str| -> Result<Schedule> {
                Schedule::new(name).append(Instruction::play(p.clone(), d)?)
            };
            let sx = play(&cal.sx[q as usize], "sx")?;
            m.add("x", &[q], Template::Fixed(play(&cal.x[q as usize], "x")?))?;
            m.add("sx", &[q], Template::Fixed(sx.clone()))?;
            m.add("id", &[q], Template::Fixed(Schedule::new("id")))?;
            m.add("rz", &[q], Template::Rz { frames: self.frames_for(q) })?;
            m.add(
                "u3",
                &[q],
                Template::U3 {
                    sx,
                    frames: self.frames_for(q),
                },
            )?;
            let meas = Schedule::new("measure")
                .insert(0, Instruction::play(cal.measure.clone(), ChannelId::measure(q))?)?
                .insert(0, Instruction::acquire(cal.acquire, ChannelId::acquire(q), q)?)?;
            m.add("measure", &[q], Template::Fixed(meas))?;
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn spec_1q() -> BackendSpec {
        BackendSpec::from_json(
            r#"{
              "dt": 1e-9, "n_qubits": 1, "h_sys": "0*Z",
              "channels": {"d0": {"frequency": 5e9, "i": "2*pi*1e6*X", "q": "2*pi*1e6*Y"}},
              "dissipators": [{"op": "Z", "rate": 1e3}],
              "readout": [{"mean0": [-1, 0], "mean1": [1, 0], "cov0": [[0.1, 0], [0, 0.1]], "cov1": [[0.1, 0], [0, 0.1]]}]
            }"#,
        )
        .unwrap()
    }

    #[test]
    fn compiles_and_round_trips() {
        let spec = spec_1q();
        let m = BackendModel::from_spec(&spec).unwrap();
        assert_eq!(m.dim(), 2);
        assert!(m.rwa);
        assert_eq!(m.channels[&ChannelId::drive(0)].frame_frequency, 5e9);
        assert!(!m.is_unitary());
        let again = BackendSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(again, spec);
        // Analytic discriminator splits the means.
        assert_eq!(m.discriminators[0].classify(Complex64::new(0.5, 0.0)), 1);
    }

    #[test]
    fn rejects_non_physical() {
        let mut s = spec_1q();
        s.channels.get_mut(&ChannelId::drive(0)).unwrap().i = Some("j*X".into());
        assert!(matches!(BackendModel::from_spec(&s), Err(Error::InvalidBackend(_))));

        let mut s = spec_1q();
        s.dissipators[0].rate = F64(-1.0);
        assert!(BackendModel::from_spec(&s).is_err());

        let mut s = spec_1q();
        s.readout[0].cov0 = [[F64(1.0), F64(2.0)], [F64(2.0), F64(1.0)]];
        assert!(BackendModel::from_spec(&s).is_err());

        let mut s = spec_1q();
        s.channels.insert(ChannelId::acquire(0), s.channels[&ChannelId::drive(0)].clone());
        assert!(BackendModel::from_spec(&s).is_err());
    }
}
