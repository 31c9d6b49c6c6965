// Copyright 2026 PulseForge Contributors
// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ChannelKind {
    Drive,
    Measure,
    Control,
    Acquire,
}

impl ChannelKind {
    fn prefix(self) -> char {
        match self {
            ChannelKind::Drive => 'd',
            ChannelKind::Measure => 'm',
            ChannelKind::Control => 'u',
            ChannelKind::Acquire => 'a',
        }
    }
}

/// A hardware channel. Drive, measure and acquire indices address qubits;
/// control indices are free-standing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChannelId {
    pub kind: ChannelKind,
    pub index: u32,
}

impl ChannelId {
    pub const fn drive(index: u32) -> Self {
        Self { kind: ChannelKind::Drive, index }
    }

    pub const fn measure(index: u32) -> Self {
        Self { kind: ChannelKind::Measure, index }
    }

    pub const fn control(index: u32) -> Self {
        Self { kind: ChannelKind::Control, index }
    }

    pub const fn acquire(index: u32) -> Self {
        Self { kind: ChannelKind::Acquire, index }
    }

    /// True for channels that transmit waveforms (everything but acquire).
    pub fn is_pulse(self) -> bool {
        self.kind != ChannelKind::Acquire
    }
}

impl fmt::Display for ChannelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind.prefix(), self.index)
    }
}

impl FromStr for ChannelId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || Error::InvalidSchedule(format!("bad channel name '{s}'"));
        let mut chars = s.chars();
        let kind = match chars.next().ok_or_else(bad)? {
            'd' => ChannelKind::Drive,
            'm' => ChannelKind::Measure,
            'u' => ChannelKind::Control,
            'a' => ChannelKind::Acquire,
            _ => return Err(bad()),
        };
        let rest = chars.as_str();
        if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let index = rest.parse().map_err(|_| bad())?;
        Ok(Self { kind, index })
    }
}

impl Serialize for ChannelId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ChannelId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
