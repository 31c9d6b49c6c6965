// Copyright 2026 PulseForge Contributors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, state_fidelity, CMatrix};
use crate::wire::{cplx, from_cplx, Cplx};

/// Choi matrix `Λ = Σ_ij |i⟩⟨j| ⊗ E(|i⟩⟨j|)`, input factor first.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix {
    matrix: CMatrix,
}

#[derive(Serialize, Deserialize)]
struct ChoiWire {
    d: usize,
    data: Vec<Cplx>,
}

impl ChoiMatrix {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let n = matrix.nrows();
        let d = (n as f64).sqrt().round() as usize;
        if !matrix.is_square() || d * d != n {
            return Err(Error::Dimension {
                expected: d * d,
                actual: n,
            });
        }
        Ok(Self { matrix })
    }

    pub fn from_superop(s: &CMatrix) -> Result<Self> {
        Ok(Self { matrix: superop_to_choi(s)? })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// Hilbert-space dimension of the channel.
    pub fn d(&self) -> usize {
        (self.matrix.nrows() as f64).sqrt().round() as usize
    }

    pub fn to_superop(&self) -> CMatrix {
        choi_to_superop(&self.matrix).expect("dimension checked at construction")
    }

    /// `Tr_out Λ`, the identity for trace-preserving channels.
    pub fn partial_trace_output(&self) -> CMatrix {
        partial_trace_output(&self.matrix)
    }

    /// Process fidelity: Uhlmann fidelity of the normalized Choi states.
    pub fn process_fidelity(&self, other: &ChoiMatrix) -> f64 {
        let d = self.d() as f64;
        let a = &self.matrix * c(1.0 / d, 0.0);
        let b = &other.matrix * c(1.0 / d, 0.0);
        state_fidelity(&a, &b)
    }

    /// `{"d": d, "data": [[re, im], …]}`, row-major.
    pub fn to_json(&self) -> String {
        let n = self.matrix.nrows();
        let mut data = Vec::with_capacity(n * n);
        for r in 0..n {
            for k in 0..n {
                data.push(cplx(self.matrix[(r, k)]));
            }
        }
        serde_json::to_string(&ChoiWire { d: self.d(), data }).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let w: ChoiWire = serde_json::from_str(text)?;
        let n = w.d * w.d;
        if w.data.len() != n * n {
            return Err(Error::Dimension {
                expected: n * n,
                actual: w.data.len(),
            });
        }
        let vals: Vec<_> = w.data.iter().map(from_cplx).collect();
        Ok(Self {
            matrix: CMatrix::from_row_slice(n, n, &vals),
        })
    }
}

pub(crate) fn partial_trace_output(m: &CMatrix) -> CMatrix {
    let d = (m.nrows() as f64).sqrt().round() as usize;
    CMatrix::from_fn(d, d, |i, j| (0..d).map(|k| m[(i * d + k, j * d + k)]).sum())
}

fn reshuffle_dim(m: &CMatrix) -> Result<usize> {
    let n = m.nrows();
    let d = (n as f64).sqrt().round() as usize;
    if !m.is_square() || d * d != n {
        return Err(Error::Dimension {
            expected: d * d,
            actual: n,
        });
    }
    Ok(d)
}

/// Reshuffle a Choi matrix into the column-stacking superoperator:
/// `S[m + d·n, i + d·j] = Λ[i·d + m, j·d + n]`.
pub fn choi_to_superop(choi: &CMatrix) -> Result<CMatrix> {
    let d = reshuffle_dim(choi)?;
    let mut s = CMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            for m in 0..d {
                for n in 0..d {
                    s[(m + d * n, i + d * j)] = choi[(i * d + m, j * d + n)];
                }
            }
        }
    }
    Ok(s)
}

/// Inverse of [`choi_to_superop`].
pub fn superop_to_choi(s: &CMatrix) -> Result<CMatrix> {
    let d = reshuffle_dim(s)?;
    let mut choi = CMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            for m in 0..d {
                for n in 0..d {
                    choi[(i * d + m, j * d + n)] = s[(m + d * n, i + d * j)];
                }
            }
        }
    }
    Ok(choi)
}
