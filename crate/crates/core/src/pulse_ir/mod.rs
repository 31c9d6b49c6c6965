// Copyright 2026 PulseForge Contributors
// SPDX-License-Identifier: Apache-2.0

//! Pulses, channels, instructions and the [`Schedule`] container.

mod channel;
mod instruction;
pub mod json;
mod pulse;
mod schedule;
mod validate;

pub use channel::{ChannelId, ChannelKind};
pub use instruction::Instruction;
pub use pulse::{sample_parametric, ParametricPulse, Pulse, SampledPulse, Shape, AMPLITUDE_SLACK};
pub use schedule::{Entry, Schedule};
pub use validate::{validate, validate_structure, Diagnostic};
