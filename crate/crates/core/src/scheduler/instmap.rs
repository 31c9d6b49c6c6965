// Copyright 2026 PulseForge Contributors
// SPDX-License-Identifier: Apache-2.0

//! Lookup table from `(gate, ordered qubits)` to schedule templates.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pulse_ir::json::{schedule_from_wire, schedule_to_wire, ScheduleWire};
use crate::pulse_ir::{validate, validate_structure, ChannelId, Instruction, Schedule};

/// Angles below this are treated as zero when emitting frame shifts.
const ANGLE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum Template {
    /// Parameterless calibrated schedule.
    Fixed(Schedule),
    /// `rz(λ)` as `ShiftPhase(−λ)` on every listed frame channel.
    Rz { frames: Vec<ChannelId> },
    /// `u3(θ, φ, λ) = Rz(φ+π)·SX·Rz(θ+π)·SX·Rz(λ)` using the given `sx`
    /// schedule and virtual Z on the listed frames.
    U3 { sx: Schedule, frames: Vec<ChannelId> },
}

impl Template {
    pub fn arity(&self) -> usize {
        match self {
            Template::Fixed(_) => 0,
            Template::Rz { .. } => 1,
            Template::U3 { .. } => 3,
        }
    }

    pub fn instantiate(&self, name: &str, params: &[f64]) -> Result<Schedule> {
        if params.len() != self.arity() {
            return Err(Error::InvalidCircuit(format!(
                "gate '{name}' takes {} parameters, got {}",
                self.arity(),
                params.len()
            )));
        }
        match self {
            Template::Fixed(s) => Ok(s.clone()),
            Template::Rz { frames } => frame_shift(Schedule::new(name), frames, -params[0], false),
            Template::U3 { sx, frames } => {
                let (theta, phi, lam) = (params[0], params[1], params[2]);
                let s = Schedule::new(name);
                if theta.abs() < ANGLE_EPS {
                    return frame_shift(s, frames, -(phi + lam), true);
                }
                let s = frame_shift(s, frames, -lam, true)?;
                let s = s.append_schedule(sx)?;
                let s = frame_shift(s, frames, -(theta + PI), true)?;
                let s = s.append_schedule(sx)?;
                frame_shift(s, frames, -(phi + PI), true)
            }
        }
    }
}

fn frame_shift(s: Schedule, frames: &[ChannelId], phase: f64, skip_zero: bool) -> Result<Schedule> {
    if skip_zero && phase.abs() < ANGLE_EPS {
        return Ok(s);
    }
    let at = s.duration();
    let mut s = s;
    for &ch in frames {
        s = s.insert(at, Instruction::shift_phase(phase, ch)?)?;
    }
    Ok(s)
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct InstructionScheduleMap {
    entries: BTreeMap<(String, Vec<u32>), Template>,
}

impl InstructionScheduleMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Register a fixed schedule, replacing any previous entry. Returns a new
    /// map.
    pub fn register_gate(&self, gate: &str, qubits: &[u32], schedule: Schedule) -> Result<Self> {
        self.register_template(gate, qubits, Template::Fixed(schedule))
    }

    pub fn register_template(&self, gate: &str, qubits: &[u32], template: Template) -> Result<Self> {
        let mut m = self.clone();
        m.add(gate, qubits, template)?;
        Ok(m)
    }

    /// In-place registration.
    pub fn add(&mut self, gate: &str, qubits: &[u32], template: Template) -> Result<()> {
        let check = |s: &Schedule| -> Result<()> {
            let diags = if gate == "measure" {
                validate(s)
            } else {
                validate_structure(s)
            };
            if let Some(d) = diags.first() {
                return Err(Error::InvalidSchedule(format!("template for '{gate}' {qubits:?}: {d}")));
            }
            Ok(())
        };
        match &template {
            Template::Fixed(s) | Template::U3 { sx: s, .. } => check(s)?,
            Template::Rz { .. } => {}
        }
        match &template {
            Template::Rz { frames } | Template::U3 { frames, .. } => {
                if let Some(ch) = frames.iter().find(|c| !c.is_pulse()) {
                    return Err(Error::ChannelMismatch {
                        instruction: "ShiftPhase",
                        channel: *ch,
                    });
                }
            }
            Template::Fixed(_) => {}
        }
        self.entries.insert((gate.to_string(), qubits.to_vec()), template);
        Ok(())
    }

    pub fn template(&self, gate: &str, qubits: &[u32]) -> Result<&Template> {
        self.entries
            .get(&(gate.to_string(), qubits.to_vec()))
            .ok_or_else(|| Error::MissingDefinition {
                gate: gate.to_string(),
                qubits: qubits.to_vec(),
            })
    }

    /// Instantiated schedule for a gate. Exact on the ordered qubit tuple.
    pub fn get(&self, gate: &str, qubits: &[u32], params: &[f64]) -> Result<Schedule> {
        self.template(gate, qubits)?.instantiate(gate, params)
    }

    pub fn has(&self, gate: &str, qubits: &[u32]) -> bool {
        self.entries.contains_key(&(gate.to_string(), qubits.to_vec()))
    }

    pub fn gates(&self) -> impl Iterator<Item = (&str, &[u32])> {
        self.entries.keys().map(|(g, q)| (g.as_str(), q.as_slice()))
    }

    pub fn to_json(&self) -> String {
        let entries = self
            .entries
            .iter()
            .map(|((gate, qubits), t)| EntryWire {
                gate: gate.clone(),
                qubits: qubits.clone(),
                schedule: match t {
                    Template::Fixed(s) => Some(schedule_to_wire(s)),
                    _ => None,
                },
                rz: match t {
                    Template::Rz { frames } => Some(RzWire { frames: frames.clone() }),
                    _ => None,
                },
                u3: match t {
                    Template::U3 { sx, frames } => Some(U3Wire {
                        sx: schedule_to_wire(sx),
                        frames: frames.clone(),
                    }),
                    _ => None,
                },
            })
            .collect();
        serde_json::to_string(&MapWire { entries }).expect("instmap serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let w: MapWire = serde_json::from_str(text)?;
        let mut m = Self::new();
        for e in w.entries {
            let t = match (e.schedule, e.rz, e.u3) {
                (Some(s), None, None) => Template::Fixed(schedule_from_wire(&s)?),
                (None, Some(r), None) => Template::Rz { frames: r.frames },
                (None, None, Some(u)) => Template::U3 {
                    sx: schedule_from_wire(&u.sx)?,
                    frames: u.frames,
                },
                _ => {
                    return Err(Error::InvalidSchedule(format!(
                        "instmap entry '{}' needs exactly one of schedule, rz, u3",
                        e.gate
                    )))
                }
            };
            m.add(&e.gate, &e.qubits, t)?;
        }
        Ok(m)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapWire {
    entries: Vec<EntryWire>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryWire {
    gate: String,
    qubits: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    schedule: Option<ScheduleWire>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    rz: Option<RzWire>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    u3: Option<U3Wire>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RzWire {
    frames: Vec<ChannelId>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct U3Wire {
    sx: ScheduleWire,
    frames: Vec<ChannelId>,
}
