// Copyright 2026 PulseForge Contributors
// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

type V2 = [f64; 2];
type M2 = [[f64; 2]; 2];

/// Two-class linear discriminant: class 1 iff `w·[I, Q] + b > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearDiscriminator {
    pub w: V2,
    pub b: f64,
    pub means: [V2; 2],
    pub covariance: M2,
}

impl LinearDiscriminator {
    pub fn score(&self, z: Complex64) -> f64 {
        self.w[0] * z.re + self.w[1] * z.im + self.b
    }

    pub fn classify(&self, z: Complex64) -> u8 {
        u8::from(self.score(z) > 0.0)
    }

    /// Boundary for known class-conditional Gaussians with equal priors,
    /// using the pooled covariance.
    pub fn from_gaussians(mean0: Complex64, mean1: Complex64, cov0: M2, cov1: M2) -> Result<Self> {
        let pooled = [
            [(cov0[0][0] + cov1[0][0]) / 2.0, (cov0[0][1] + cov1[0][1]) / 2.0],
            [(cov0[1][0] + cov1[1][0]) / 2.0, (cov0[1][1] + cov1[1][1]) / 2.0],
        ];
        build([mean0.re, mean0.im], [mean1.re, mean1.im], pooled, 0.0)
    }
}

fn inv2(m: M2) -> Option<M2> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let scale = m[0][0].abs() + m[1][1].abs();
    if !(det.abs() > 1e-14 * scale * scale) || !det.is_finite() {
        return None;
    }
    Some([[m[1][1] / det, -m[0][1] / det], [-m[1][0] / det, m[0][0] / det]])
}

fn build(mu0: V2, mu1: V2, cov: M2, log_prior_ratio: f64) -> Result<LinearDiscriminator> {
    let inv = match inv2(cov) {
        Some(inv) => inv,
        None => {
            // Ridge by a small multiple of the average variance.
            let ridge = ((cov[0][0] + cov[1][1]) / 2.0).abs().max(1e-300) * 1e-9 + 1e-300;
            inv2([[cov[0][0] + ridge, cov[0][1]], [cov[1][0], cov[1][1] + ridge]])
                .ok_or_else(|| Error::Singular("pooled covariance".into()))?
        }
    };
    let dm = [mu1[0] - mu0[0], mu1[1] - mu0[1]];
    let w = [inv[0][0] * dm[0] + inv[0][1] * dm[1], inv[1][0] * dm[0] + inv[1][1] * dm[1]];
    let mid = [(mu0[0] + mu1[0]) / 2.0, (mu0[1] + mu1[1]) / 2.0];
    let b = -(w[0] * mid[0] + w[1] * mid[1]) + log_prior_ratio;
    Ok(LinearDiscriminator {
        w,
        b,
        means: [mu0, mu1],
        covariance: cov,
    })
}

/// Fit LDA with pooled covariance and empirical class priors.
pub fn fit_lda(points: &[(Complex64, u8)]) -> Result<LinearDiscriminator> {
    let mut n = [0usize; 2];
    let mut sum = [[0.0; 2]; 2];
    for &(z, label) in points {
        if label > 1 {
            return Err(Error::InvalidData(format!("label {label} is not 0 or 1")));
        }
        let l = label as usize;
        n[l] += 1;
        sum[l][0] += z.re;
        sum[l][1] += z.im;
    }
    if n[0] == 0 || n[1] == 0 {
        return Err(Error::InvalidData("LDA needs samples from both classes".into()));
    }
    let mu = [
        [sum[0][0] / n[0] as f64, sum[0][1] / n[0] as f64],
        [sum[1][0] / n[1] as f64, sum[1][1] / n[1] as f64],
    ];
    let mut s = [[0.0; 2]; 2];
    for &(z, label) in points {
        let m = mu[label as usize];
        let d = [z.re - m[0], z.im - m[1]];
        for a in 0..2 {
            for b in 0..2 {
                s[a][b] += d[a] * d[b];
            }
        }
    }
    let dof = (n[0] + n[1]).saturating_sub(2).max(1) as f64;
    for row in &mut s {
        for v in row.iter_mut() {
            *v /= dof;
        }
    }
    build(mu[0], mu[1], s, (n[1] as f64 / n[0] as f64).ln())
}
