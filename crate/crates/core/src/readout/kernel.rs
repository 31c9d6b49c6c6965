// Copyright 2026 PulseForge Contributors
// SPDX-License-Identifier: Apache-2.0

use std::ops::Range;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Boxcar integrator: mean of the trace over `window`.
pub fn boxcar_kernel(trace: &[Complex64], window: Range<usize>) -> Result<Complex64> {
    if window.start >= window.end {
        return Err(Error::InvalidData("empty kernel window".into()));
    }
    if window.end > trace.len() {
        return Err(Error::InvalidData(format!(
            "kernel window {}..{} exceeds trace length {}",
            window.start,
            window.end,
            trace.len()
        )));
    }
    let n = (window.end - window.start) as f64;
    let sum: Complex64 = trace[window].iter().sum();
    Ok(sum / n)
}
