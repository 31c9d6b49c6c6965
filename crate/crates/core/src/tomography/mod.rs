// Copyright 2026 PulseForge Contributors
// SPDX-License-Identifier: Apache-2.0

//! Two-qubit quantum process tomography.
//!
//! Sixteen product preparations times nine product measurement bases give
//! 144 experiments, plus four computational-basis calibrations for readout
//! mitigation. Reconstruction is linear inversion followed by projection
//! onto the CPTP set.

mod choi;
mod fit;
mod mitigation;
mod sets;

pub use choi::{choi_to_superop, superop_to_choi, ChoiMatrix};
pub use fit::{fit_choi, project_cptp, TomographyData};
pub use mitigation::{mitigate, project_simplex, AssignmentMatrix};
pub use sets::{
    exact_probabilities, qpt_schedules, run_qpt, Basis, Prep, QptRun, QptSet, TomographyLabel, CALIBRATION_LABELS,
};
