// Copyright 2026 PulseForge Contributors
// SPDX-License-Identifier: Apache-2.0

use super::channel::ChannelId;
use super::pulse::Pulse;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Instruction {
    Play { pulse: Pulse, channel: ChannelId },
    Delay { duration: u64, channel: ChannelId },
    /// Advance the channel frame phase, in radians.
    ShiftPhase { phase: f64, channel: ChannelId },
    /// Replace the channel frame frequency, in Hz.
    SetFrequency { frequency: f64, channel: ChannelId },
    Acquire { duration: u64, channel: ChannelId, slot: u32 },
    /// Zero-duration fence: later appends on these channels start no
    /// earlier than the barrier.
    Barrier { channels: Vec<ChannelId> },
}

impl Instruction {
    pub fn play(pulse: impl Into<Pulse>, channel: ChannelId) -> Result<Self> {
        let i = Instruction::Play {
            pulse: pulse.into(),
            channel,
        };
        i.check()?;
        Ok(i)
    }

    pub fn delay(duration: u64, channel: ChannelId) -> Self {
        Instruction::Delay { duration, channel }
    }

    pub fn shift_phase(phase: f64, channel: ChannelId) -> Result<Self> {
        let i = Instruction::ShiftPhase { phase, channel };
        i.check()?;
        Ok(i)
    }

    pub fn set_frequency(frequency: f64, channel: ChannelId) -> Result<Self> {
        let i = Instruction::SetFrequency { frequency, channel };
        i.check()?;
        Ok(i)
    }

    pub fn acquire(duration: u64, channel: ChannelId, slot: u32) -> Result<Self> {
        let i = Instruction::Acquire {
            duration,
            channel,
            slot,
        };
        i.check()?;
        Ok(i)
    }

    pub fn barrier(channels: impl IntoIterator<Item = ChannelId>) -> Self {
        let mut channels: Vec<ChannelId> = channels.into_iter().collect();
        channels.sort();
        channels.dedup();
        Instruction::Barrier { channels }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Instruction::Play { .. } => "Play",
            Instruction::Delay { .. } => "Delay",
            Instruction::ShiftPhase { .. } => "ShiftPhase",
            Instruction::SetFrequency { .. } => "SetFrequency",
            Instruction::Acquire { .. } => "Acquire",
            Instruction::Barrier { .. } => "Barrier",
        }
    }

    pub fn duration(&self) -> u64 {
        match self {
            Instruction::Play { pulse, .. } => pulse.duration(),
            Instruction::Delay { duration, .. } | Instruction::Acquire { duration, .. } => *duration,
            Instruction::ShiftPhase { .. } | Instruction::SetFrequency { .. } | Instruction::Barrier { .. } => 0,
        }
    }

    pub fn channels(&self) -> &[ChannelId] {
        match self {
            Instruction::Play { channel, .. }
            | Instruction::Delay { channel, .. }
            | Instruction::ShiftPhase { channel, .. }
            | Instruction::SetFrequency { channel, .. }
            | Instruction::Acquire { channel, .. } => std::slice::from_ref(channel),
            Instruction::Barrier { channels } => channels,
        }
    }

    /// Channel-kind and operand checks.
    pub fn check(&self) -> Result<()> {
        match self {
            Instruction::Play { channel, .. }
            | Instruction::ShiftPhase { channel, .. }
            | Instruction::SetFrequency { channel, .. } => {
                if !channel.is_pulse() {
                    return Err(Error::ChannelMismatch {
                        instruction: self.name(),
                        channel: *channel,
                    });
                }
            }
            Instruction::Acquire { channel, .. } => {
                if channel.is_pulse() {
                    return Err(Error::ChannelMismatch {
                        instruction: self.name(),
                        channel: *channel,
                    });
                }
            }
            Instruction::Delay { .. } | Instruction::Barrier { .. } => {}
        }
        match self {
            Instruction::ShiftPhase { phase, .. } if !phase.is_finite() => {
                Err(Error::InvalidSchedule("phase is not finite".into()))
            }
            Instruction::SetFrequency { frequency, .. } if !frequency.is_finite() => {
                Err(Error::InvalidSchedule("frequency is not finite".into()))
            }
            _ => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pulse_ir::ParametricPulse;
    use num_complex::Complex64;

    #[test]
    fn durations() {
        let p = ParametricPulse::constant(7, Complex64::new(0.1, 0.0)).unwrap();
        assert_eq!(Instruction::play(p, ChannelId::drive(0)).unwrap().duration(), 7);
        assert_eq!(Instruction::delay(5, ChannelId::drive(0)).duration(), 5);
        assert_eq!(Instruction::shift_phase(1.0, ChannelId::control(0)).unwrap().duration(), 0);
        assert_eq!(Instruction::barrier([ChannelId::drive(0)]).duration(), 0);
    }

    #[test]
    fn channel_kind_checks() {
        let p = ParametricPulse::constant(7, Complex64::new(0.1, 0.0)).unwrap();
        assert!(Instruction::play(p, ChannelId::acquire(0)).is_err());
        assert!(Instruction::shift_phase(0.1, ChannelId::acquire(0)).is_err());
        assert!(Instruction::set_frequency(5e9, ChannelId::acquire(0)).is_err());
        assert!(Instruction::acquire(10, ChannelId::measure(0), 0).is_err());
        assert!(Instruction::acquire(10, ChannelId::acquire(0), 0).is_ok());
    }
}
