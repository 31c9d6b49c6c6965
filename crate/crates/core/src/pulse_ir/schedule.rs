// Copyright 2026 PulseForge Contributors
// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeSet;

use super::channel::ChannelId;
use super::instruction::Instruction;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub start: u64,
    pub instruction: Instruction,
}

impl Entry {
    pub fn stop(&self) -> u64 {
        self.start + self.instruction.duration()
    }
}

/// A basic block of absolutely timed instructions. Values are immutable:
/// every operation returns a new schedule.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Schedule {
    name: String,
    entries: Vec<Entry>,
}

impl Schedule {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            entries: Vec::new(),
        }
    }

    /// Build from entries in order, enforcing channel kinds and the overlap
    /// rule.
    pub fn from_entries(name: impl Into<String>, entries: Vec<Entry>) -> Result<Self> {
        let mut s = Self::new(name);
        for e in entries {
            s.push_checked(e.start, e.instruction)?;
        }
        Ok(s)
    }

    /// Build without checks. Use [`super::validate`] to inspect the result.
    pub fn from_entries_unchecked(name: impl Into<String>, entries: Vec<Entry>) -> Self {
        Self {
            name: name.into(),
            entries,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(&self, name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            entries: self.entries.clone(),
        }
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn duration(&self) -> u64 {
        self.entries.iter().map(Entry::stop).max().unwrap_or(0)
    }

    pub fn channels(&self) -> BTreeSet<ChannelId> {
        self.entries
            .iter()
            .flat_map(|e| e.instruction.channels().iter().copied())
            .collect()
    }

    pub fn earliest_start(&self) -> Option<u64> {
        self.entries.iter().map(|e| e.start).min()
    }

    /// Latest stop time on `channel`, counting zero-duration entries.
    pub fn stop_time(&self, channel: ChannelId) -> Option<u64> {
        self.entries
            .iter()
            .filter(|e| e.instruction.channels().contains(&channel))
            .map(Entry::stop)
            .max()
    }

    /// Append an instruction at the latest stop time over its channels.
    pub fn append(&self, instruction: Instruction) -> Result<Self> {
        let at = instruction
            .channels()
            .iter()
            .filter_map(|&c| self.stop_time(c))
            .max()
            .unwrap_or(0);
        self.insert(at, instruction)
    }

    /// Append a schedule, shifted to the latest stop time over the channels
    /// the two schedules share.
    pub fn append_schedule(&self, other: &Schedule) -> Result<Self> {
        let at = other
            .channels()
            .into_iter()
            .filter_map(|c| self.stop_time(c))
            .max()
            .unwrap_or(0);
        self.insert_schedule(at, other)
    }

    pub fn insert(&self, at: u64, instruction: Instruction) -> Result<Self> {
        let mut s = self.clone();
        s.push_checked(at, instruction)?;
        Ok(s)
    }

    /// Insert every entry of `other` offset by `at`.
    pub fn insert_schedule(&self, at: u64, other: &Schedule) -> Result<Self> {
        let mut s = self.clone();
        for e in &other.entries {
            s.push_checked(at + e.start, e.instruction.clone())?;
        }
        Ok(s)
    }

    pub fn shift(&self, delta: i64) -> Result<Self> {
        if let Some(first) = self.earliest_start() {
            if delta < 0 && delta.unsigned_abs() > first {
                return Err(Error::NegativeStart { delta, start: first });
            }
        }
        let entries = self
            .entries
            .iter()
            .map(|e| Entry {
                start: e.start.wrapping_add_signed(delta),
                instruction: e.instruction.clone(),
            })
            .collect();
        Ok(Self {
            name: self.name.clone(),
            entries,
        })
    }

    /// Keep only entries matching `keep`.
    pub fn filter(&self, keep: impl Fn(&Entry) -> bool) -> Self {
        Self {
            name: self.name.clone(),
            entries: self.entries.iter().filter(|e| keep(e)).cloned().collect(),
        }
    }

    pub(crate) fn push_checked(&mut self, at: u64, instruction: Instruction) -> Result<()> {
        instruction.check()?;
        let dur = instruction.duration();
        if dur > 0 {
            let end = at + dur;
            for &ch in instruction.channels() {
                for e in &self.entries {
                    let d = e.instruction.duration();
                    if d == 0 || !e.instruction.channels().contains(&ch) {
                        continue;
                    }
                    if at < e.start + d && e.start < end {
                        return Err(Error::Overlap {
                            channel: ch,
                            new_start: at,
                            new_end: end,
                            existing_start: e.start,
                            existing_end: e.start + d,
                        });
                    }
                }
            }
        }
        self.entries.push(Entry { start: at, instruction });
        Ok(())
    }
}
