// Copyright 2026 PulseForge Contributors
// SPDX-License-Identifier: Apache-2.0

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Readout assignment matrix, `m[observed][prepared]`; columns sum to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssignmentMatrix {
    pub m: Vec<Vec<f64>>,
}

impl AssignmentMatrix {
    pub fn identity(n: usize) -> Self {
        Self {
            m: (0..n).map(|r| (0..n).map(|k| if r == k { 1.0 } else { 0.0 }).collect()).collect(),
        }
    }

    /// Build from observed distributions, `observed[prepared][outcome]`.
    pub fn from_calibration(observed: &[Vec<f64>]) -> Result<Self> {
        let n = observed.len();
        if observed.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidData("calibration distributions must be square".into()));
        }
        let mut m = vec![vec![0.0; n]; n];
        for (prep, dist) in observed.iter().enumerate() {
            let total: f64 = dist.iter().sum();
            if !(total > 0.0) || dist.iter().any(|p| !(*p >= 0.0)) {
                return Err(Error::InvalidData(format!("calibration {prep} is not a distribution")));
            }
            for (obs, p) in dist.iter().enumerate() {
                m[obs][prep] = p / total;
            }
        }
        Ok(Self { m })
    }

    /// Tensor product of per-qubit matrices, `factors[q]` for qubit `q`;
    /// outcome index bit `q` is qubit `q`.
    pub fn tensor(factors: &[AssignmentMatrix]) -> Self {
        let mut acc = DMatrix::from_element(1, 1, 1.0);
        for f in factors.iter().rev() {
            acc = acc.kronecker(&f.to_matrix());
        }
        Self::from_matrix(&acc)
    }

    pub fn dim(&self) -> usize {
        self.m.len()
    }

    pub fn to_matrix(&self) -> DMatrix<f64> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |r, k| self.m[r][k])
    }

    fn from_matrix(a: &DMatrix<f64>) -> Self {
        Self {
            m: (0..a.nrows()).map(|r| (0..a.ncols()).map(|k| a[(r, k)]).collect()).collect(),
        }
    }

    pub fn apply(&self, p: &[f64]) -> Vec<f64> {
        (self.to_matrix() * DVector::from_column_slice(p)).iter().copied().collect()
    }
}

/// Invert the assignment matrix on observed probabilities and project the
/// result onto the probability simplex.
pub fn mitigate(observed: &[f64], m: &AssignmentMatrix) -> Result<Vec<f64>> {
    if observed.len() != m.dim() {
        return Err(Error::Dimension {
            expected: m.dim(),
            actual: observed.len(),
        });
    }
    let a = m.to_matrix();
    let svd = a.clone().svd(false, false);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if !(smin > smax * 1e-12) {
        return Err(Error::Singular("assignment matrix".into()));
    }
    let x = a
        .lu()
        .solve(&DVector::from_column_slice(observed))
        .ok_or_else(|| Error::Singular("assignment matrix".into()))?;
    Ok(project_simplex(x.as_slice()))
}

/// Euclidean projection onto `{x ≥ 0, Σx = 1}`.
pub fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (j, &x) in u.iter().enumerate() {
        cum += x;
        let t = (cum - 1.0) / (j + 1) as f64;
        if x - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|x| (x - theta).max(0.0)).collect()
}
