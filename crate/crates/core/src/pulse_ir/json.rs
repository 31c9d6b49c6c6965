// Copyright 2026 PulseForge Contributors
// SPDX-License-Identifier: Apache-2.0

//! Schedule JSON format.
//!
//! ```json
//! {"name":"x","entries":[{"t":0,"inst":{"op":"play","ch":"d0",
//!   "pulse":{"shape":"gaussian","duration":128,"amp":[..],"sigma":..}}}]}
//! ```
//!
//! Parsing re-validates pulse bounds but not timing, so invalid schedules
//! can be loaded and reported by [`super::validate`].

use serde::{Deserialize, Serialize};

use super::channel::ChannelId;
use super::instruction::Instruction;
use super::pulse::{ParametricPulse, Pulse, SampledPulse, Shape};
use super::schedule::{Entry, Schedule};
use crate::error::Result;
use crate::wire::{cplx, from_cplx, Cplx, F64};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleWire {
    pub name: String,
    pub entries: Vec<EntryWire>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryWire {
    pub t: u64,
    pub inst: InstWire,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum InstWire {
    Play { ch: ChannelId, pulse: PulseWire },
    Delay { ch: ChannelId, duration: u64 },
    ShiftPhase { ch: ChannelId, phase: F64 },
    SetFrequency { ch: ChannelId, frequency: F64 },
    Acquire { ch: ChannelId, duration: u64, slot: u32 },
    Barrier { channels: Vec<ChannelId> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PulseWire {
    Shape(ShapeWire),
    Samples { name: String, samples: Vec<Cplx> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum ShapeWire {
    Gaussian {
        duration: u64,
        amp: Cplx,
        sigma: F64,
    },
    GaussianSquare {
        duration: u64,
        amp: Cplx,
        sigma: F64,
        square_width: u64,
    },
    Drag {
        duration: u64,
        amp: Cplx,
        sigma: F64,
        beta: F64,
    },
    Constant {
        duration: u64,
        amp: Cplx,
    },
}

pub fn pulse_to_wire(p: &Pulse) -> PulseWire {
    match p {
        Pulse::Parametric(pp) => PulseWire::Shape(match *pp.shape() {
            Shape::Gaussian { duration, amp, sigma } => ShapeWire::Gaussian {
                duration,
                amp: cplx(amp),
                sigma: F64(sigma),
            },
            Shape::GaussianSquare {
                duration,
                amp,
                sigma,
                square_width,
            } => ShapeWire::GaussianSquare {
                duration,
                amp: cplx(amp),
                sigma: F64(sigma),
                square_width,
            },
            Shape::Drag {
                duration,
                amp,
                sigma,
                beta,
            } => ShapeWire::Drag {
                duration,
                amp: cplx(amp),
                sigma: F64(sigma),
                beta: F64(beta),
            },
            Shape::Constant { duration, amp } => ShapeWire::Constant {
                duration,
                amp: cplx(amp),
            },
        }),
        Pulse::Sampled(sp) => PulseWire::Samples {
            name: sp.name().to_string(),
            samples: sp.samples().iter().map(|&z| cplx(z)).collect(),
        },
    }
}

pub fn pulse_from_wire(w: &PulseWire) -> Result<Pulse> {
    Ok(match w {
        PulseWire::Shape(s) => {
            let shape = match s {
                ShapeWire::Gaussian { duration, amp, sigma } => Shape::Gaussian {
                    duration: *duration,
                    amp: from_cplx(amp),
                    sigma: sigma.0,
                },
                ShapeWire::GaussianSquare {
                    duration,
                    amp,
                    sigma,
                    square_width,
                } => Shape::GaussianSquare {
                    duration: *duration,
                    amp: from_cplx(amp),
                    sigma: sigma.0,
                    square_width: *square_width,
                },
                ShapeWire::Drag {
                    duration,
                    amp,
                    sigma,
                    beta,
                } => Shape::Drag {
                    duration: *duration,
                    amp: from_cplx(amp),
                    sigma: sigma.0,
                    beta: beta.0,
                },
                ShapeWire::Constant { duration, amp } => Shape::Constant {
                    duration: *duration,
                    amp: from_cplx(amp),
                },
            };
            Pulse::Parametric(ParametricPulse::new(shape)?)
        }
        PulseWire::Samples { name, samples } => {
            Pulse::Sampled(SampledPulse::new(name.clone(), samples.iter().map(from_cplx).collect())?)
        }
    })
}

pub fn instruction_to_wire(i: &Instruction) -> InstWire {
    match i {
        Instruction::Play { pulse, channel } => InstWire::Play {
            ch: *channel,
            pulse: pulse_to_wire(pulse),
        },
        Instruction::Delay { duration, channel } => InstWire::Delay {
            ch: *channel,
            duration: *duration,
        },
        Instruction::ShiftPhase { phase, channel } => InstWire::ShiftPhase {
            ch: *channel,
            phase: F64(*phase),
        },
        Instruction::SetFrequency { frequency, channel } => InstWire::SetFrequency {
            ch: *channel,
            frequency: F64(*frequency),
        },
        Instruction::Acquire {
            duration,
            channel,
            slot,
        } => InstWire::Acquire {
            ch: *channel,
            duration: *duration,
            slot: *slot,
        },
        Instruction::Barrier { channels } => InstWire::Barrier {
            channels: channels.clone(),
        },
    }
}

pub fn instruction_from_wire(w: &InstWire) -> Result<Instruction> {
    Ok(match w {
        InstWire::Play { ch, pulse } => Instruction::Play {
            pulse: pulse_from_wire(pulse)?,
            channel: *ch,
        },
        InstWire::Delay { ch, duration } => Instruction::Delay {
            duration: *duration,
            channel: *ch,
        },
        InstWire::ShiftPhase { ch, phase } => Instruction::ShiftPhase {
            phase: phase.0,
            channel: *ch,
        },
        InstWire::SetFrequency { ch, frequency } => Instruction::SetFrequency {
            frequency: frequency.0,
            channel: *ch,
        },
        InstWire::Acquire { ch, duration, slot } => Instruction::Acquire {
            duration: *duration,
            channel: *ch,
            slot: *slot,
        },
        InstWire::Barrier { channels } => Instruction::Barrier {
            channels: channels.clone(),
        },
    })
}

pub fn schedule_to_wire(s: &Schedule) -> ScheduleWire {
    ScheduleWire {
        name: s.name().to_string(),
        entries: s
            .entries()
            .iter()
            .map(|e| EntryWire {
                t: e.start,
                inst: instruction_to_wire(&e.instruction),
            })
            .collect(),
    }
}

pub fn schedule_from_wire(w: &ScheduleWire) -> Result<Schedule> {
    let entries = w
        .entries
        .iter()
        .map(|e| {
            Ok(Entry {
                start: e.t,
                instruction: instruction_from_wire(&e.inst)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Schedule::from_entries_unchecked(w.name.clone(), entries))
}

pub fn schedule_to_json(s: &Schedule) -> String {
    serde_json::to_string(&schedule_to_wire(s)).expect("schedule serialization is infallible")
}

pub fn schedule_from_json(text: &str) -> Result<Schedule> {
    let w: ScheduleWire = serde_json::from_str(text)?;
    schedule_from_wire(&w)
}
