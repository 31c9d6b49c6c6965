// Copyright 2026 PulseForge Contributors
// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::choi::{partial_trace_output, ChoiMatrix};
use super::sets::{Basis, TomographyLabel};
use crate::error::{Error, Result};
use crate::linalg::{cr, frobenius, kron, pauli_string, project_psd, CMatrix};

/// Outcome distributions per experiment; index bit `q` is qubit `q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TomographyData {
    pub entries: Vec<(TomographyLabel, Vec<f64>)>,
}

const LETTERS: [char; 4] = ['I', 'X', 'Y', 'Z'];
const MAX_ITER: usize = 500;
const TOL: f64 = 1e-10;
/// Keeps the inverse-variance weight of a saturated parity finite.
const WEIGHT_FLOOR: f64 = 1e-2;

fn two_letter(k: usize) -> String {
    [LETTERS[k / 4], LETTERS[k % 4]].iter().collect()
}

fn letter_index(ch: char) -> usize {
    LETTERS.iter().position(|&l| l == ch).expect("Pauli letter")
}

/// Weighted linear-inversion estimate in the normalized Pauli basis
/// `Q = σ_in ⊗ σ_out / 4`, then projection onto CPTP maps.
///
/// Each parity `y` is weighted by `1 / (1 − y² + 0.01)`, its binomial
/// variance up to the shot count.
pub fn fit_choi(data: &TomographyData) -> Result<ChoiMatrix> {
    let mut by_label: BTreeMap<TomographyLabel, &Vec<f64>> = BTreeMap::new();
    for (l, p) in &data.entries {
        if p.len() != 4 {
            return Err(Error::InvalidData(format!("{l}: expected 4 outcome probabilities, got {}", p.len())));
        }
        by_label.insert(*l, p);
    }
    let all = TomographyLabel::all();
    if let Some(missing) = all.iter().find(|l| !by_label.contains_key(l)) {
        return Err(Error::InvalidData(format!("incomplete tomography data: missing {missing}")));
    }

    let in_paulis: Vec<CMatrix> = (0..16).map(|k| pauli_string(&two_letter(k)).expect("valid")).collect();
    let mut ata = DMatrix::<f64>::zeros(256, 256);
    let mut aty = DVector::<f64>::zeros(256);
    for label in &all {
        let p = by_label[label];
        let rho_t = label.input_state().transpose();
        let coeff: Vec<f64> = in_paulis.iter().map(|s| (&rho_t * s).trace().re).collect();
        for mask in 0..4usize {
            let letters: Vec<usize> = (0..2)
                .map(|q| {
                    if (mask >> q) & 1 == 1 {
                        letter_index(match label.meas[q] {
                            Basis::X => 'X',
                            Basis::Y => 'Y',
                            Basis::Z => 'Z',
                        })
                    } else {
                        0
                    }
                })
                .collect();
            let out_idx = 4 * letters[1] + letters[0];
            let y: f64 = (0..4)
                .map(|s| {
                    let parity = (0..2).filter(|q| (mask >> q) & 1 == 1 && (s >> q) & 1 == 1).count();
                    if parity % 2 == 0 {
                        p[s]
                    } else {
                        -p[s]
                    }
                })
                .sum();
            let w = 1.0 / (1.0 - y * y + WEIGHT_FLOOR);
            // Row is nonzero only on columns (a, out_idx).
            for a in 0..16 {
                let ca = coeff[a] * w;
                if ca == 0.0 {
                    continue;
                }
                let col_a = 16 * a + out_idx;
                aty[col_a] += ca * y;
                for b in 0..16 {
                    ata[(col_a, 16 * b + out_idx)] += ca * coeff[b];
                }
            }
        }
    }
    let chol = ata
        .cholesky()
        .ok_or_else(|| Error::Singular("tomography design matrix is rank deficient".into()))?;
    let x = chol.solve(&aty);
    let mut lam = CMatrix::zeros(16, 16);
    for a in 0..16 {
        for b in 0..16 {
            let v = x[16 * a + b];
            if v != 0.0 {
                lam += kron(&in_paulis[a], &in_paulis[b]) * cr(v / 4.0);
            }
        }
    }
    ChoiMatrix::new(project_cptp(&lam))
}

fn project_tp(m: &CMatrix) -> CMatrix {
    let d = (m.nrows() as f64).sqrt().round() as usize;
    let excess = partial_trace_output(m) - CMatrix::identity(d, d);
    m - kron(&excess, &CMatrix::identity(d, d)) * cr(1.0 / d as f64)
}

/// Nearest CPTP Choi matrix in Frobenius norm, by Dykstra's alternating
/// projections between the PSD cone and the trace-preserving subspace.
pub fn project_cptp(choi: &CMatrix) -> CMatrix {
    let mut x = (choi + choi.adjoint()) * cr(0.5);
    let n = x.nrows();
    let mut p = CMatrix::zeros(n, n);
    let mut q = CMatrix::zeros(n, n);
    for _ in 0..MAX_ITER {
        let y = project_psd(&(&x + &p));
        p = &x + &p - &y;
        let next = project_tp(&(&y + &q));
        q = &y + &q - &next;
        let change = frobenius(&(&next - &x));
        x = next;
        if change < TOL {
            break;
        }
    }
    (&x + x.adjoint()) * cr(0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eigh;
    use crate::tomography::{exact_probabilities, superop_to_choi};

    fn data_for(s: &CMatrix) -> TomographyData {
        TomographyData {
            entries: TomographyLabel::all()
                .into_iter()
                .map(|l| (l, exact_probabilities(s, &l)))
                .collect(),
        }
    }

    #[test]
    fn identity_channel_reconstructs() {
        let s = CMatrix::identity(16, 16);
        let fit = fit_choi(&data_for(&s)).unwrap();
        let expect = superop_to_choi(&s).unwrap();
        assert!(frobenius(&(fit.matrix() - expect)) < 1e-6);
    }

    #[test]
    fn incomplete_data_rejected() {
        let mut d = data_for(&CMatrix::identity(16, 16));
        d.entries.pop();
        assert!(matches!(fit_choi(&d), Err(Error::InvalidData(_))));
    }

    #[test]
    fn projection_is_cptp_and_idempotent() {
        let m = CMatrix::from_fn(16, 16, |r, k| cr(((r * 7 + k * 3) % 11) as f64 / 11.0 - 0.4));
        let p = project_cptp(&m);
        let (vals, _) = eigh(&p);
        assert!(vals[0] >= -1e-8, "{}", vals[0]);
        assert!(frobenius(&(partial_trace_output(&p) - CMatrix::identity(4, 4))) < 1e-6);
        let again = project_cptp(&p);
        assert!(frobenius(&(again - &p)) < 1e-8);
    }
}
