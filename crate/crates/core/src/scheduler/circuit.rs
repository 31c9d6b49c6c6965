// Copyright 2026 PulseForge Contributors
// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::wire::F64;

#[derive(Debug, Clone, PartialEq)]
pub struct GateOp {
    pub name: String,
    pub qubits: Vec<u32>,
    pub params: Vec<f64>,
}

impl GateOp {
    pub fn new(name: impl Into<String>, qubits: impl Into<Vec<u32>>, params: impl Into<Vec<f64>>) -> Self {
        Self {
            name: name.into(),
            qubits: qubits.into(),
            params: params.into(),
        }
    }
}

/// Gate-level circuit: ordered gates followed by terminal measurements
/// given as `(qubit, memory slot)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MiniCircuit {
    pub num_qubits: u32,
    pub ops: Vec<GateOp>,
    pub measurements: Vec<(u32, u32)>,
}

impl MiniCircuit {
    pub fn new(num_qubits: u32) -> Self {
        Self {
            num_qubits,
            ops: Vec::new(),
            measurements: Vec::new(),
        }
    }

    pub fn gate(mut self, name: &str, qubits: &[u32], params: &[f64]) -> Self {
        self.ops.push(GateOp::new(name, qubits, params));
        self
    }

    pub fn measure(mut self, qubit: u32, slot: u32) -> Self {
        self.measurements.push((qubit, slot));
        self
    }

    pub fn measure_all(mut self) -> Self {
        self.measurements = (0..self.num_qubits).map(|q| (q, q)).collect();
        self
    }

    pub fn check(&self) -> Result<()> {
        for (k, op) in self.ops.iter().enumerate() {
            if op.qubits.is_empty() {
                return Err(Error::InvalidCircuit(format!("op {k} '{}' has no qubits", op.name)));
            }
            let mut seen = BTreeSet::new();
            for &q in &op.qubits {
                if q >= self.num_qubits {
                    return Err(Error::InvalidCircuit(format!(
                        "op {k} '{}' uses qubit {q} >= {}",
                        op.name, self.num_qubits
                    )));
                }
                if !seen.insert(q) {
                    return Err(Error::InvalidCircuit(format!("op {k} '{}' repeats qubit {q}", op.name)));
                }
            }
            if op.params.iter().any(|p| !p.is_finite()) {
                return Err(Error::InvalidCircuit(format!("op {k} '{}' has a non-finite parameter", op.name)));
            }
        }
        let mut seen = BTreeSet::new();
        let mut slots = BTreeSet::new();
        for &(q, s) in &self.measurements {
            if q >= self.num_qubits {
                return Err(Error::InvalidCircuit(format!("measurement on qubit {q} >= {}", self.num_qubits)));
            }
            if !seen.insert(q) {
                return Err(Error::InvalidCircuit(format!("qubit {q} measured twice")));
            }
            if !slots.insert(s) {
                return Err(Error::InvalidCircuit(format!("memory slot {s} written twice")));
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CircuitWire {
    n: u32,
    ops: Vec<OpWire>,
    meas: Vec<[u32; 2]>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OpWire {
    g: String,
    q: Vec<u32>,
    #[serde(default)]
    p: Vec<F64>,
}

pub fn circuit_from_json(text: &str) -> Result<MiniCircuit> {
    let w: CircuitWire = serde_json::from_str(text)?;
    let c = MiniCircuit {
        num_qubits: w.n,
        ops: w
            .ops
            .into_iter()
            .map(|o| GateOp {
                name: o.g,
                qubits: o.q,
                params: o.p.into_iter().map(|x| x.0).collect(),
            })
            .collect(),
        measurements: w.meas.into_iter().map(|[q, s]| (q, s)).collect(),
    };
    c.check()?;
    Ok(c)
}

pub fn circuit_to_json(c: &MiniCircuit) -> String {
    let w = CircuitWire {
        n: c.num_qubits,
        ops: c
            .ops
            .iter()
            .map(|o| OpWire {
                g: o.name.clone(),
                q: o.qubits.clone(),
                p: o.params.iter().map(|&x| F64(x)).collect(),
            })
            .collect(),
        meas: c.measurements.iter().map(|&(q, s)| [q, s]).collect(),
    };
    serde_json::to_string(&w).expect("circuit serialization is infallible")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let text = r#"{"n":2,"ops":[{"g":"cx","q":[1,0],"p":[]}],"meas":[[0,0],[1,1]]}"#;
        let c = circuit_from_json(text).unwrap();
        assert_eq!(c.ops[0].qubits, vec![1, 0]);
        assert_eq!(circuit_from_json(&circuit_to_json(&c)).unwrap(), c);
    }

    #[test]
    fn rejects_bad_qubits() {
        assert!(MiniCircuit::new(2).gate("x", &[2], &[]).check().is_err());
        assert!(MiniCircuit::new(2).gate("cx", &[1, 1], &[]).check().is_err());
        assert!(MiniCircuit::new(2).measure(0, 0).measure(0, 1).check().is_err());
        assert!(MiniCircuit::new(2).measure(0, 0).measure(1, 0).check().is_err());
    }
}
