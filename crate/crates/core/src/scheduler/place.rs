// Copyright 2026 PulseForge Contributors
// SPDX-License-Identifier: Apache-2.0

//! Gate placement.
//!
//! Each gate is an atomic block occupying its qubits and every channel its
//! template touches. ASAP starts a block at the latest availability over
//! those resources. ALAP runs ASAP over the reversed program (measurements
//! first) and reflects the result in time, so gates on measured qubits end
//! flush against the measurement and gates feeding no measurement end at the
//! block end.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use super::circuit::MiniCircuit;
use super::instmap::InstructionScheduleMap;
use crate::error::{Error, Result};
use crate::pulse_ir::{ChannelId, Entry, Instruction, Schedule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SchedulingPolicy {
    #[default]
    Alap,
    Asap,
}

impl FromStr for SchedulingPolicy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "alap" => Ok(Self::Alap),
            "asap" => Ok(Self::Asap),
            _ => Err(Error::InvalidCircuit(format!("unknown policy '{s}'"))),
        }
    }
}

impl fmt::Display for SchedulingPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Alap => "alap",
            Self::Asap => "asap",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Resource {
    Qubit(u32),
    Channel(ChannelId),
}

/// Where each gate landed. `ops[k]` covers circuit op `k`; its entries are
/// contiguous in the output schedule starting at `entry_offset`.
#[derive(Debug, Clone, PartialEq)]
pub struct Placement {
    pub start: u64,
    pub duration: u64,
    pub entry_offset: usize,
    pub entry_count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    pub ops: Vec<Placement>,
    /// Common start of all measurements, if any.
    pub measure_start: Option<u64>,
}

struct Block {
    template: Schedule,
    resources: BTreeSet<Resource>,
}

fn gate_blocks(circuit: &MiniCircuit, map: &InstructionScheduleMap) -> Result<Vec<Block>> {
    circuit
        .ops
        .iter()
        .map(|op| {
            let template = map.get(&op.name, &op.qubits, &op.params)?;
            let mut resources: BTreeSet<Resource> = op.qubits.iter().map(|&q| Resource::Qubit(q)).collect();
            resources.extend(template.channels().into_iter().map(Resource::Channel));
            Ok(Block { template, resources })
        })
        .collect()
}

/// Measurement templates with acquire slots remapped to the circuit's.
fn measure_block(circuit: &MiniCircuit, map: &InstructionScheduleMap) -> Result<Option<(Vec<Schedule>, BTreeSet<Resource>, BTreeSet<ChannelId>)>> {
    if circuit.measurements.is_empty() {
        return Ok(None);
    }
    let mut templates = Vec::new();
    let mut fence = BTreeSet::new();
    for &(q, slot) in &circuit.measurements {
        let t = map.get("measure", &[q], &[])?;
        let remapped: Vec<Entry> = t
            .entries()
            .iter()
            .map(|e| Entry {
                start: e.start,
                instruction: match &e.instruction {
                    Instruction::Acquire { duration, channel, .. } if channel.index == q => Instruction::Acquire {
                        duration: *duration,
                        channel: *channel,
                        slot,
                    },
                    other => other.clone(),
                },
            })
            .collect();
        fence.extend([ChannelId::drive(q), ChannelId::measure(q), ChannelId::acquire(q)]);
        fence.extend(t.channels());
        templates.push(Schedule::from_entries_unchecked(t.name(), remapped));
    }
    let mut resources: BTreeSet<Resource> = circuit.measurements.iter().map(|&(q, _)| Resource::Qubit(q)).collect();
    resources.extend(fence.iter().copied().map(Resource::Channel));
    Ok(Some((templates, resources, fence)))
}

fn asap<'a>(blocks: impl Iterator<Item = (&'a BTreeSet<Resource>, u64)>) -> Vec<u64> {
    let mut avail: BTreeMap<Resource, u64> = BTreeMap::new();
    blocks
        .map(|(res, dur)| {
            let start = res.iter().map(|r| avail.get(r).copied().unwrap_or(0)).max().unwrap_or(0);
            for r in res {
                avail.insert(*r, start + dur);
            }
            start
        })
        .collect()
}

/// Lower a circuit to a schedule.
pub fn schedule_circuit(circuit: &MiniCircuit, map: &InstructionScheduleMap, policy: SchedulingPolicy) -> Result<Schedule> {
    schedule_circuit_with_layout(circuit, map, policy).map(|(s, _)| s)
}

pub fn schedule_circuit_with_layout(
    circuit: &MiniCircuit,
    map: &InstructionScheduleMap,
    policy: SchedulingPolicy,
) -> Result<(Schedule, Layout)> {
    circuit.check()?;
    let blocks = gate_blocks(circuit, map)?;
    let measure = measure_block(circuit, map)?;
    let measure_dur = measure
        .as_ref()
        .map(|(ts, _, _)| ts.iter().map(Schedule::duration).max().unwrap_or(0))
        .unwrap_or(0);

    let (gate_starts, measure_start) = match policy {
        SchedulingPolicy::Asap => {
            let mut seq: Vec<(&BTreeSet<Resource>, u64)> =
                blocks.iter().map(|b| (&b.resources, b.template.duration())).collect();
            if let Some((_, res, _)) = &measure {
                seq.push((res, measure_dur));
            }
            let mut starts = asap(seq.into_iter());
            let m = measure.as_ref().map(|_| starts.pop().expect("measure start"));
            (starts, m)
        }
        SchedulingPolicy::Alap => {
            let mut seq: Vec<(&BTreeSet<Resource>, u64)> = Vec::new();
            if let Some((_, res, _)) = &measure {
                seq.push((res, measure_dur));
            }
            seq.extend(blocks.iter().rev().map(|b| (&b.resources, b.template.duration())));
            let durs: Vec<u64> = seq.iter().map(|(_, d)| *d).collect();
            let rev = asap(seq.into_iter());
            let total = rev.iter().zip(&durs).map(|(s, d)| s + d).max().unwrap_or(0);
            let mut reflected: Vec<u64> = rev.iter().zip(&durs).map(|(s, d)| total - s - d).collect();
            let m = measure.as_ref().map(|_| reflected.remove(0));
            reflected.reverse();
            (reflected, m)
        }
    };

    let mut out = Schedule::new("circuit");
    let mut ops = Vec::with_capacity(blocks.len());
    for (b, &start) in blocks.iter().zip(&gate_starts) {
        let offset = out.entries().len();
        out = out.insert_schedule(start, &b.template)?;
        ops.push(Placement {
            start,
            duration: b.template.duration(),
            entry_offset: offset,
            entry_count: b.template.entries().len(),
        });
    }
    if let (Some((templates, _, fence)), Some(t)) = (&measure, measure_start) {
        out = out.insert(t, Instruction::barrier(fence.iter().copied()))?;
        for m in templates {
            out = out.insert_schedule(t, m)?;
        }
    }
    Ok((out, Layout { ops, measure_start }))
}
