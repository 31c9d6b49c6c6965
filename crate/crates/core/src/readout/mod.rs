// Copyright 2026 PulseForge Contributors
// SPDX-License-Identifier: Apache-2.0

//! Level-1 to level-2 readout: boxcar kernel, LDA discriminator, assignment
//! fidelity with Jeffreys intervals, crosstalk correlation tests.

mod assignment;
mod crosstalk;
mod kernel;
mod lda;

pub use assignment::{assignment_fidelity, from_counts, jeffreys_interval, AssignmentFidelityReport};
pub use crosstalk::{correlation_t_test, crosstalk_test, pearson, CalibrationIq, Component, CrosstalkResult};
pub use kernel::boxcar_kernel;
pub use lda::{fit_lda, LinearDiscriminator};
