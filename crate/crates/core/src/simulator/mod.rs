// Copyright 2026 PulseForge Contributors
// SPDX-License-Identifier: Apache-2.0

//! Time-domain open-system simulator standing in for hardware.

mod backend;
mod evolve;
pub mod expr;
mod measure;

pub use backend::{
    BackendModel, BackendSpec, CalibrationSpec, Calibrations, ChannelSpec, ChannelTerms, Cov2, DiscriminatorSpec,
    DissipatorSpec, MeasureCalSpec, QubitCalSpec, QubitReadout, ReadoutSpec,
};
pub use evolve::{evolve_superoperator, frame_corrected_superoperator, Propagators, SimOptions};
pub use measure::{simulate, simulate_batch, simulate_with, Acquisition, SimResult};
