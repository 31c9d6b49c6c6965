// Copyright 2026 PulseForge Contributors
// SPDX-License-Identifier: Apache-2.0

//! Frame resolution and carrier modulation.
//!
//! A Play starting at cycle `t0` emits, at absolute cycle `n = t0 + j`,
//! the complex value `e^{i(2π f n dt + φ)} d_j` where `(f, φ)` is the channel
//! frame in force at `t0`. The real output is its real part. The carrier is
//! phase-coherent: `SetFrequency` changes `f` without resetting phase.
//! Zero-duration instructions at equal timestamps apply in entry order.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pulse_ir::{validate_structure, ChannelId, Instruction, Schedule};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub frequency: f64,
    pub phase: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AcquireWindow {
    pub start: u64,
    pub duration: u64,
    pub slot: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelProgram {
    pub channel: ChannelId,
    /// Envelope samples `d_j` placed at absolute cycles.
    pub envelope: Vec<Complex64>,
    /// Modulated complex signal; the physical output is its real part.
    pub signal: Vec<Complex64>,
    pub acquire_windows: Vec<AcquireWindow>,
}

impl ChannelProgram {
    /// Real output `D_n`.
    pub fn output(&self) -> Vec<f64> {
        self.signal.iter().map(|z| z.re).collect()
    }
}

/// Entry indices in execution order: by start time, then entry order.
fn execution_order(schedule: &Schedule) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..schedule.entries().len()).collect();
    idx.sort_by_key(|&i| (schedule.entries()[i].start, i));
    idx
}

/// Lower a schedule to per-channel sample streams of length
/// `schedule.duration()`.
pub fn lower(
    schedule: &Schedule,
    dt: f64,
    initial_frequencies: &BTreeMap<ChannelId, f64>,
) -> Result<BTreeMap<ChannelId, ChannelProgram>> {
    if let Some(d) = validate_structure(schedule).first() {
        return Err(Error::InvalidSchedule(d.to_string()));
    }
    let n = schedule.duration() as usize;
    let mut used = BTreeSet::new();
    for e in schedule.entries() {
        if !matches!(e.instruction, Instruction::Barrier { .. }) {
            used.extend(e.instruction.channels().iter().copied());
        }
    }
    let mut frames = BTreeMap::new();
    let mut out = BTreeMap::new();
    for &ch in &used {
        if ch.is_pulse() {
            let f = *initial_frequencies.get(&ch).ok_or(Error::MissingFrequency(ch))?;
            frames.insert(ch, Frame { frequency: f, phase: 0.0 });
        }
        out.insert(
            ch,
            ChannelProgram {
                channel: ch,
                envelope: vec![Complex64::new(0.0, 0.0); n],
                signal: vec![Complex64::new(0.0, 0.0); n],
                acquire_windows: Vec::new(),
            },
        );
    }
    for i in execution_order(schedule) {
        let e = &schedule.entries()[i];
        match &e.instruction {
            Instruction::ShiftPhase { phase, channel } => {
                frames.get_mut(channel).expect("pulse channel has a frame").phase += phase;
            }
            Instruction::SetFrequency { frequency, channel } => {
                frames.get_mut(channel).expect("pulse channel has a frame").frequency = *frequency;
            }
            Instruction::Play { pulse, channel } => {
                let fr = frames[channel];
                let prog = out.get_mut(channel).expect("channel allocated");
                for (j, d) in pulse.samples().into_iter().enumerate() {
                    let t = e.start as usize + j;
                    let arg = 2.0 * PI * fr.frequency * (t as f64) * dt + fr.phase;
                    prog.envelope[t] = d;
                    prog.signal[t] = Complex64::from_polar(1.0, arg) * d;
                }
            }
            Instruction::Acquire {
                duration,
                channel,
                slot,
            } => {
                out.get_mut(channel)
                    .expect("channel allocated")
                    .acquire_windows
                    .push(AcquireWindow {
                        start: e.start,
                        duration: *duration,
                        slot: *slot,
                    });
            }
            Instruction::Delay { .. } | Instruction::Barrier { .. } => {}
        }
    }
    Ok(out)
}

/// Piecewise-constant frame history `(time, f, φ)` of a pulse channel.
/// Frame changes at equal timestamps collapse into one segment.
pub fn frame_trace(schedule: &Schedule, channel: ChannelId, initial_frequency: f64) -> Result<Vec<(u64, f64, f64)>> {
    if !channel.is_pulse() {
        return Err(Error::ChannelMismatch {
            instruction: "frame_trace",
            channel,
        });
    }
    let mut trace = vec![(0u64, initial_frequency, 0.0)];
    for i in execution_order(schedule) {
        let e = &schedule.entries()[i];
        let (f, p) = {
            let last = trace.last().expect("nonempty");
            (last.1, last.2)
        };
        let next = match e.instruction {
            Instruction::ShiftPhase { phase, channel: c } if c == channel => (f, p + phase),
            Instruction::SetFrequency { frequency, channel: c } if c == channel => (frequency, p),
            _ => continue,
        };
        let last = trace.last_mut().expect("nonempty");
        if last.0 == e.start {
            last.1 = next.0;
            last.2 = next.1;
        } else {
            trace.push((e.start, next.0, next.1));
        }
    }
    Ok(trace)
}
