// Copyright 2026 PulseForge Contributors
// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::distribution::{Beta, ContinuousCDF};

use super::lda::LinearDiscriminator;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AssignmentFidelityReport {
    pub fidelity: f64,
    pub lo: f64,
    pub hi: f64,
    /// `Pr[1|0]` and its count.
    pub p10: f64,
    pub k10: usize,
    /// `Pr[0|1]` and its count.
    pub p01: f64,
    pub k01: usize,
    pub n0: usize,
    pub n1: usize,
}

/// Two-sided Jeffreys interval for a binomial rate with `k` successes out
/// of `n`, at confidence `level`.
pub fn jeffreys_interval(k: usize, n: usize, level: f64) -> Result<(f64, f64)> {
    if n == 0 || k > n {
        return Err(Error::InvalidData(format!("invalid binomial count {k}/{n}")));
    }
    let alpha = 1.0 - level;
    let beta = Beta::new(k as f64 + 0.5, (n - k) as f64 + 0.5).map_err(|e| Error::InvalidData(e.to_string()))?;
    let lo = if k == 0 { 0.0 } else { beta.inverse_cdf(alpha / 2.0) };
    let hi = if k == n { 1.0 } else { beta.inverse_cdf(1.0 - alpha / 2.0) };
    Ok((lo, hi))
}

/// `F_a = 1 − (Pr[0|1] + Pr[1|0])/2` with a 95% interval from per-rate
/// Jeffreys intervals combined by interval arithmetic.
pub fn assignment_fidelity(
    disc: &LinearDiscriminator,
    prepared0: &[Complex64],
    prepared1: &[Complex64],
) -> Result<AssignmentFidelityReport> {
    if prepared0.is_empty() || prepared1.is_empty() {
        return Err(Error::InvalidData("assignment fidelity needs shots for both states".into()));
    }
    let k10 = prepared0.iter().filter(|z| disc.classify(**z) == 1).count();
    let k01 = prepared1.iter().filter(|z| disc.classify(**z) == 0).count();
    from_counts(k10, prepared0.len(), k01, prepared1.len())
}

pub fn from_counts(k10: usize, n0: usize, k01: usize, n1: usize) -> Result<AssignmentFidelityReport> {
    let (lo10, hi10) = jeffreys_interval(k10, n0, 0.95)?;
    let (lo01, hi01) = jeffreys_interval(k01, n1, 0.95)?;
    let p10 = k10 as f64 / n0 as f64;
    let p01 = k01 as f64 / n1 as f64;
    Ok(AssignmentFidelityReport {
        fidelity: 1.0 - (p10 + p01) / 2.0,
        lo: 1.0 - (hi10 + hi01) / 2.0,
        hi: 1.0 - (lo10 + lo01) / 2.0,
        p10,
        k10,
        p01,
        k01,
        n0,
        n1,
    })
}
