// Copyright 2026 PulseForge Contributors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{cr, expm, frobenius, hamiltonian_superop, logm, pauli_string, CMatrix};

/// Labels of `B_ij`, index `4i + j`; the left letter acts on qubit 1.
pub const PAULI_PAIRS: [&str; 16] = [
    "II", "IX", "IY", "IZ", "XI", "XX", "XY", "XZ", "YI", "YX", "YY", "YZ", "ZI", "ZX", "ZY", "ZZ",
];

/// `B_ij = ½ P_i ⊗ P_j`.
pub fn basis_operator(index: usize) -> CMatrix {
    pauli_string(PAULI_PAIRS[index]).expect("static labels") * cr(0.5)
}

/// `S_G = log(S_E) / t`, checked by re-exponentiation.
pub fn generator(superop: &CMatrix, t: f64) -> Result<CMatrix> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidData(format!("evolution time must be positive, got {t}")));
    }
    let g = logm(superop)? * cr(1.0 / t);
    let back = expm(&(&g * cr(t)));
    let err = frobenius(&(back - superop));
    if err > 1e-8 {
        return Err(Error::NoConvergence(format!("exp(t·S_G) misses S_E by {err:.3e}")));
    }
    Ok(g)
}

/// Project a generator onto the Hamiltonian superoperators of the Pauli
/// basis: `ω_ij = Tr[S_Lij† S_G] / ‖S_Lij‖²`. `ω_II` is always zero.
pub fn extract_coefficients(gen: &CMatrix) -> Result<[f64; 16]> {
    if gen.nrows() != 16 || gen.ncols() != 16 {
        return Err(Error::Dimension {
            expected: 16,
            actual: gen.nrows(),
        });
    }
    let mut out = [0.0; 16];
    for (k, w) in out.iter_mut().enumerate().skip(1) {
        let sl = hamiltonian_superop(&basis_operator(k));
        let norm2: f64 = sl.iter().map(|z| z.norm_sqr()).sum();
        let ip: f64 = sl.iter().zip(gen.iter()).map(|(a, b)| (a.conj() * b).re).sum();
        *w = ip / norm2;
    }
    Ok(out)
}

/// Generator of `H = Σ ω_ij B_ij`.
pub fn build_generator(omega: &[f64; 16]) -> CMatrix {
    let mut h = CMatrix::zeros(4, 4);
    for (k, w) in omega.iter().enumerate() {
        h += basis_operator(k) * cr(*w);
    }
    hamiltonian_superop(&h)
}

/// Coefficients of one effective CR Hamiltonian, rad/s.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianCoefficients {
    /// Time-averaged drive amplitude of one CR pulse.
    pub a_bar: f64,
    /// Duration of one CR pulse, seconds.
    pub t_cr: f64,
    pub n_cr: u32,
    /// `ω_ij` indexed like [`PAULI_PAIRS`].
    pub omega: [f64; 16],
}

impl HamiltonianCoefficients {
    /// Estimate from a process superoperator of `n_cr` pulses of length
    /// `t_cr` each.
    pub fn from_superop(superop: &CMatrix, a_bar: f64, t_cr: f64, n_cr: u32) -> Result<Self> {
        let g = generator(superop, t_cr * n_cr as f64)?;
        Ok(Self {
            a_bar,
            t_cr,
            n_cr,
            omega: extract_coefficients(&g)?,
        })
    }

    pub fn get(&self, label: &str) -> Option<f64> {
        PAULI_PAIRS.iter().position(|p| *p == label).map(|k| self.omega[k])
    }

    pub fn zx(&self) -> f64 {
        self.omega[13]
    }
}
