// Copyright 2026 PulseForge Contributors
// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use super::channel::{ChannelId, ChannelKind};
use super::instruction::Instruction;
use super::schedule::Schedule;

#[derive(Debug, Clone, PartialEq)]
pub enum Diagnostic {
    Overlap {
        channel: ChannelId,
        first: (u64, u64),
        second: (u64, u64),
    },
    ChannelMismatch {
        entry: usize,
        instruction: &'static str,
        channel: ChannelId,
    },
    /// Non-finite operand or similar defect in a single entry.
    BadOperand { entry: usize, message: String },
    /// Acquire with no overlapping Play on the matching measure channel.
    MisalignedAcquire { channel: ChannelId, start: u64, end: u64 },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::Overlap { channel, first, second } => write!(
                f,
                "overlap on {channel}: [{}, {}) and [{}, {})",
                first.0, first.1, second.0, second.1
            ),
            Diagnostic::ChannelMismatch {
                entry,
                instruction,
                channel,
            } => write!(f, "entry {entry}: {instruction} cannot target {channel}"),
            Diagnostic::BadOperand { entry, message } => write!(f, "entry {entry}: {message}"),
            Diagnostic::MisalignedAcquire { channel, start, end } => write!(
                f,
                "acquire on {channel} at [{start}, {end}) has no overlapping play on m{}",
                channel.index
            ),
        }
    }
}

/// Structural checks: channel kinds, operands and overlaps.
pub fn validate_structure(schedule: &Schedule) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let entries = schedule.entries();
    for (k, e) in entries.iter().enumerate() {
        if let Err(err) = e.instruction.check() {
            match err {
                crate::error::Error::ChannelMismatch { instruction, channel } => out.push(Diagnostic::ChannelMismatch {
                    entry: k,
                    instruction,
                    channel,
                }),
                other => out.push(Diagnostic::BadOperand {
                    entry: k,
                    message: other.to_string(),
                }),
            }
        }
    }
    for (i, a) in entries.iter().enumerate() {
        let da = a.instruction.duration();
        if da == 0 {
            continue;
        }
        for b in &entries[i + 1..] {
            let db = b.instruction.duration();
            if db == 0 || !(a.start < b.start + db && b.start < a.start + da) {
                continue;
            }
            for ch in a.instruction.channels() {
                if b.instruction.channels().contains(ch) {
                    out.push(Diagnostic::Overlap {
                        channel: *ch,
                        first: (a.start, a.start + da),
                        second: (b.start, b.start + db),
                    });
                }
            }
        }
    }
    out
}

/// All schedule invariants plus measurement alignment. Empty means valid.
pub fn validate(schedule: &Schedule) -> Vec<Diagnostic> {
    let mut out = validate_structure(schedule);
    for e in schedule.entries() {
        if let Instruction::Acquire { duration, channel, .. } = &e.instruction {
            if channel.kind != ChannelKind::Acquire {
                continue;
            }
            let (s, end) = (e.start, e.start + duration);
            let m = ChannelId::measure(channel.index);
            let aligned = schedule.entries().iter().any(|p| match &p.instruction {
                Instruction::Play { channel: pc, pulse } if *pc == m => {
                    s < p.start + pulse.duration() && p.start < end
                }
                _ => false,
            });
            if !aligned {
                out.push(Diagnostic::MisalignedAcquire {
                    channel: *channel,
                    start: s,
                    end,
                });
            }
        }
    }
    out
}
