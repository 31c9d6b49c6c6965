// Copyright 2026 PulseForge Contributors
// SPDX-License-Identifier: Apache-2.0

//! Pulse-level programming and two-qubit characterization.
//!
//! The crate is layered bottom-up: [`pulse_ir`] defines timed pulse
//! programs, [`scheduler`] lowers gate circuits onto them, [`codegen`]
//! resolves frames into sample streams, and [`simulator`] integrates an
//! open-system model that stands in for hardware. The characterization
//! modules ([`tomography`], [`hamiltonian_est`], [`fidelity_opt`],
//! [`readout`]) operate on simulator output.

pub mod codegen;
pub mod error;
pub mod fidelity_opt;
pub mod hamiltonian_est;
pub mod linalg;
pub mod pulse_ir;
pub mod random;
pub mod readout;
pub mod scheduler;
pub mod simulator;
pub mod tomography;
pub mod wire;

pub use error::{Error, ErrorKind, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub use pulse_ir::{ChannelId, Instruction, ParametricPulse, Pulse, SampledPulse, Schedule};
