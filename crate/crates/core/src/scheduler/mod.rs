// Copyright 2026 PulseForge Contributors
// SPDX-License-Identifier: Apache-2.0

//! Gate circuits, the instruction-schedule map and circuit scheduling.

mod circuit;
mod instmap;
mod place;

pub use circuit::{circuit_from_json, circuit_to_json, GateOp, MiniCircuit};
pub use instmap::{InstructionScheduleMap, Template};
pub use place::{schedule_circuit, schedule_circuit_with_layout, Layout, Placement, SchedulingPolicy};
