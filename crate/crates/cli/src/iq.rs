// Copyright 2026 PulseForge Contributors
// SPDX-License-Identifier: Apache-2.0

//! Level-1 IQ records and the discrimination report.

use std::collections::{BTreeMap, BTreeSet};

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use pulseforge_core::readout::{
    assignment_fidelity, crosstalk_test, fit_lda, AssignmentFidelityReport, CalibrationIq, CrosstalkResult,
    LinearDiscriminator,
};
use serde::{Deserialize, Serialize};

/// Shots of one qubit in one schedule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IqRecord {
    pub schedule: String,
    pub qubit: u32,
    pub shots: Vec<[f64; 2]>,
}

impl IqRecord {
    pub fn points(&self) -> Vec<Complex64> {
        self.shots.iter().map(|[i, q]| Complex64::new(*i, *q)).collect()
    }
}

/// Accepted file layouts: one record, a list of records, or any object
/// with an `iq` list (such as level-1 `simulate` output).
#[derive(Deserialize)]
#[serde(untagged)]
enum IqFile {
    One(IqRecord),
    Many(Vec<IqRecord>),
    Wrapped { iq: Vec<IqRecord> },
}

pub fn parse_records(text: &str) -> Result<Vec<IqRecord>> {
    let file: IqFile = serde_json::from_str(text).context("expected an IQ record, a list of records or {\"iq\": [...]}")?;
    Ok(match file {
        IqFile::One(r) => vec![r],
        IqFile::Many(v) | IqFile::Wrapped { iq: v } => v,
    })
}

/// Prepared state of `qubit` in a calibration schedule `cal_<bits>`, where
/// the rightmost bit belongs to the lowest-numbered qubit.
fn prepared_bit(schedule: &str, qubit: u32, qubits: &[u32]) -> Result<u8> {
    let bits = schedule
        .strip_prefix("cal_")
        .with_context(|| format!("calibration schedule '{schedule}' is not named cal_<bits>"))?;
    if bits.len() != qubits.len() || !bits.chars().all(|c| c == '0' || c == '1') {
        bail!("calibration label '{schedule}' needs one bit per qubit ({} qubits)", qubits.len());
    }
    let pos = qubits.iter().position(|&q| q == qubit).expect("qubit taken from the same records");
    let c = bits.as_bytes()[bits.len() - 1 - pos];
    Ok(c - b'0')
}

#[derive(Debug, Clone, Serialize)]
pub struct QubitReadout {
    pub qubit: u32,
    pub discriminator: LinearDiscriminator,
    pub assignment: AssignmentFidelityReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct DataSummary {
    pub schedule: String,
    pub qubit: u32,
    pub shots: usize,
    pub ones: usize,
    pub p1: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReadoutReport {
    pub qubits: Vec<QubitReadout>,
    /// Present for two-qubit calibrations.
    pub crosstalk: Option<Vec<CrosstalkResult>>,
    pub data: Vec<DataSummary>,
}

/// Per-qubit LDA from calibration records. Each qubit is trained on
/// `train` and scored on `test`; both may be the same set.
pub fn readout_report(train: &[IqRecord], test: &[IqRecord], data: &[IqRecord]) -> Result<ReadoutReport> {
    let qubits: Vec<u32> = train.iter().map(|r| r.qubit).collect::<BTreeSet<_>>().into_iter().collect();
    if qubits.is_empty() {
        bail!("no calibration records");
    }
    let split = |recs: &[IqRecord], q: u32| -> Result<[Vec<Complex64>; 2]> {
        let mut out = [Vec::new(), Vec::new()];
        for r in recs.iter().filter(|r| r.qubit == q) {
            out[prepared_bit(&r.schedule, q, &qubits)? as usize].extend(r.points());
        }
        Ok(out)
    };
    let mut per_qubit = Vec::new();
    let mut discs = BTreeMap::new();
    for &q in &qubits {
        let [zeros, ones] = split(train, q)?;
        if zeros.is_empty() || ones.is_empty() {
            bail!("qubit {q}: calibration needs shots prepared in both |0⟩ and |1⟩");
        }
        let labelled: Vec<(Complex64, u8)> =
            zeros.iter().map(|z| (*z, 0)).chain(ones.iter().map(|z| (*z, 1))).collect();
        let disc = fit_lda(&labelled).with_context(|| format!("fitting discriminator for qubit {q}"))?;
        let [t0, t1] = split(test, q)?;
        let assignment = assignment_fidelity(&disc, &t0, &t1)?;
        discs.insert(q, disc);
        per_qubit.push(QubitReadout {
            qubit: q,
            discriminator: disc,
            assignment,
        });
    }
    let crosstalk = if qubits.len() == 2 { Some(crosstalk_of(test, &qubits)?) } else { None };
    let mut summaries = Vec::new();
    for r in data {
        let disc = discs
            .get(&r.qubit)
            .with_context(|| format!("no calibration for qubit {} (schedule {})", r.qubit, r.schedule))?;
        let ones = r.points().iter().filter(|z| disc.classify(**z) == 1).count();
        summaries.push(DataSummary {
            schedule: r.schedule.clone(),
            qubit: r.qubit,
            shots: r.shots.len(),
            ones,
            p1: if r.shots.is_empty() { 0.0 } else { ones as f64 / r.shots.len() as f64 },
        });
    }
    Ok(ReadoutReport {
        qubits: per_qubit,
        crosstalk,
        data: summaries,
    })
}

fn crosstalk_of(records: &[IqRecord], qubits: &[u32]) -> Result<Vec<CrosstalkResult>> {
    let mut iq: [[Vec<Complex64>; 2]; 4] = Default::default();
    for r in records {
        let pos = qubits.iter().position(|&q| q == r.qubit).expect("known qubit");
        let b0 = prepared_bit(&r.schedule, qubits[0], qubits)? as usize;
        let b1 = prepared_bit(&r.schedule, qubits[1], qubits)? as usize;
        iq[2 * b1 + b0][pos].extend(r.points());
    }
    Ok(crosstalk_test(&CalibrationIq { iq })?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(schedule: &str, qubit: u32, centre: f64, n: usize) -> IqRecord {
        let shots = (0..n)
            .map(|k| {
                let a = k as f64 * 0.7;
                [centre + 0.1 * a.sin(), 0.1 * (1.3 * a).cos()]
            })
            .collect();
        IqRecord {
            schedule: schedule.into(),
            qubit,
            shots,
        }
    }

    #[test]
    fn file_layouts_parse() {
        let one = r#"{"schedule":"cal_01","qubit":16,"shots":[[0.1,0.2]]}"#;
        assert_eq!(parse_records(one).unwrap().len(), 1);
        assert_eq!(parse_records(&format!("[{one},{one}]")).unwrap().len(), 2);
        assert_eq!(parse_records(&format!("{{\"iq\":[{one}],\"shots\":1}}")).unwrap().len(), 1);
        assert!(parse_records(r#"{"schedule":"x"}"#).is_err());
    }

    #[test]
    fn label_bits_are_right_to_left() {
        let qs = [16, 17];
        assert_eq!(prepared_bit("cal_01", 16, &qs).unwrap(), 1);
        assert_eq!(prepared_bit("cal_01", 17, &qs).unwrap(), 0);
        assert!(prepared_bit("cal_1", 16, &qs).is_err());
        assert!(prepared_bit("x_01", 16, &qs).is_err());
    }

    #[test]
    fn separated_single_qubit_calibration() {
        let cal = vec![rec("cal_0", 3, 0.0, 50), rec("cal_1", 3, 2.0, 50)];
        let data = vec![rec("run", 3, 2.0, 10)];
        let r = readout_report(&cal, &cal, &data).unwrap();
        assert_eq!(r.qubits[0].assignment.fidelity, 1.0);
        assert!(r.crosstalk.is_none());
        assert_eq!(r.data[0].ones, 10);
    }
}
