// Copyright 2026 PulseForge Contributors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::fit::TomographyData;
use super::mitigation::{mitigate, AssignmentMatrix};
use crate::error::{Error, Result};
use crate::linalg::{c, cr, kron, unitary_superop, vec_col, CMatrix};
use crate::pulse_ir::Schedule;
use crate::scheduler::{schedule_circuit, InstructionScheduleMap, MiniCircuit, SchedulingPolicy};
use crate::simulator::{simulate_batch, BackendModel, SimResult};

/// Single-qubit preparation state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Prep {
    /// |0⟩
    Zero,
    /// |1⟩
    One,
    /// (|0⟩ + |1⟩)/√2
    Plus,
    /// (|0⟩ + i|1⟩)/√2
    PlusI,
}

/// Single-qubit measurement basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Basis {
    X,
    Y,
    Z,
}

impl Prep {
    pub const ALL: [Prep; 4] = [Prep::Zero, Prep::One, Prep::Plus, Prep::PlusI];

    pub fn symbol(self) -> char {
        match self {
            Prep::Zero => '0',
            Prep::One => '1',
            Prep::Plus => '+',
            Prep::PlusI => 'r',
        }
    }

    fn from_symbol(ch: char) -> Option<Self> {
        Prep::ALL.into_iter().find(|p| p.symbol() == ch)
    }

    /// `(gate, params)` preparing the state from |0⟩.
    fn gate(self) -> Option<(&'static str, [f64; 3])> {
        match self {
            Prep::Zero => None,
            Prep::One => Some(("x", [0.0; 3])),
            Prep::Plus => Some(("u3", [FRAC_PI_2, 0.0, 0.0])),
            Prep::PlusI => Some(("u3", [FRAC_PI_2, FRAC_PI_2, 0.0])),
        }
    }

    pub fn density(self) -> CMatrix {
        let s = FRAC_1_SQRT_2;
        let psi = match self {
            Prep::Zero => [cr(1.0), cr(0.0)],
            Prep::One => [cr(0.0), cr(1.0)],
            Prep::Plus => [cr(s), cr(s)],
            Prep::PlusI => [cr(s), c(0.0, s)],
        };
        CMatrix::from_fn(2, 2, |r, k| psi[r] * psi[k].conj())
    }
}

impl Basis {
    pub const ALL: [Basis; 3] = [Basis::X, Basis::Y, Basis::Z];

    pub fn symbol(self) -> char {
        match self {
            Basis::X => 'X',
            Basis::Y => 'Y',
            Basis::Z => 'Z',
        }
    }

    fn from_symbol(ch: char) -> Option<Self> {
        Basis::ALL.into_iter().find(|b| b.symbol() == ch)
    }

    /// Rotation mapping the basis' +1 eigenstate to |0⟩.
    fn gate(self) -> Option<[f64; 3]> {
        match self {
            Basis::X => Some([FRAC_PI_2, 0.0, PI]),
            Basis::Y => Some([FRAC_PI_2, 0.0, FRAC_PI_2]),
            Basis::Z => None,
        }
    }

    /// Ideal rotation unitary, up to global phase.
    pub fn rotation(self) -> CMatrix {
        let s = FRAC_1_SQRT_2;
        match self {
            // H
            Basis::X => CMatrix::from_row_slice(2, 2, &[cr(s), cr(s), cr(s), cr(-s)]),
            // H·S†
            Basis::Y => CMatrix::from_row_slice(2, 2, &[cr(s), c(0.0, -s), cr(s), c(0.0, s)]),
            Basis::Z => CMatrix::identity(2, 2),
        }
    }
}

/// One tomography experiment. Arrays are indexed by qubit; the text form
/// lists qubit 1 first, e.g. `{"prep": "+0", "meas": "XZ"}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "LabelWire", into = "LabelWire")]
pub struct TomographyLabel {
    pub prep: [Prep; 2],
    pub meas: [Basis; 2],
}

#[derive(Serialize, Deserialize)]
struct LabelWire {
    prep: String,
    meas: String,
}

impl From<TomographyLabel> for LabelWire {
    fn from(l: TomographyLabel) -> Self {
        Self {
            prep: [l.prep[1].symbol(), l.prep[0].symbol()].iter().collect(),
            meas: [l.meas[1].symbol(), l.meas[0].symbol()].iter().collect(),
        }
    }
}

impl TryFrom<LabelWire> for TomographyLabel {
    type Error = String;

    fn try_from(w: LabelWire) -> std::result::Result<Self, String> {
        let p: Vec<char> = w.prep.chars().collect();
        let m: Vec<char> = w.meas.chars().collect();
        let bad = || format!("bad tomography label prep='{}' meas='{}'", w.prep, w.meas);
        if p.len() != 2 || m.len() != 2 {
            return Err(bad());
        }
        Ok(Self {
            prep: [
                Prep::from_symbol(p[1]).ok_or_else(bad)?,
                Prep::from_symbol(p[0]).ok_or_else(bad)?,
            ],
            meas: [
                Basis::from_symbol(m[1]).ok_or_else(bad)?,
                Basis::from_symbol(m[0]).ok_or_else(bad)?,
            ],
        })
    }
}

impl fmt::Display for TomographyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = LabelWire::from(*self);
        write!(f, "qpt_{}_{}", w.prep, w.meas)
    }
}

impl TomographyLabel {
    /// All 144 labels, preparation-major.
    pub fn all() -> Vec<TomographyLabel> {
        let mut out = Vec::with_capacity(144);
        for p1 in Prep::ALL {
            for p0 in Prep::ALL {
                for m1 in Basis::ALL {
                    for m0 in Basis::ALL {
                        out.push(TomographyLabel {
                            prep: [p0, p1],
                            meas: [m0, m1],
                        });
                    }
                }
            }
        }
        out
    }

    /// Two-qubit input state `ρ₁ ⊗ ρ₀`.
    pub fn input_state(&self) -> CMatrix {
        kron(&self.prep[1].density(), &self.prep[0].density())
    }

    /// Two-qubit basis rotation applied before measuring.
    pub fn rotation(&self) -> CMatrix {
        kron(&self.meas[1].rotation(), &self.meas[0].rotation())
    }
}

/// Calibration labels `cal_ij`: qubit 1 in `|i⟩`, qubit 0 in `|j⟩`, outcome
/// index `2i + j`.
pub const CALIBRATION_LABELS: [&str; 4] = ["cal_00", "cal_01", "cal_10", "cal_11"];

/// Tomography schedules for a two-qubit gate on qubits 0 and 1.
#[derive(Debug, Clone)]
pub struct QptSet {
    pub experiments: Vec<(TomographyLabel, Schedule)>,
    pub calibrations: Vec<(String, Schedule)>,
}

impl QptSet {
    /// All 148 schedules, experiments first.
    pub fn schedules(&self) -> Vec<Schedule> {
        self.experiments
            .iter()
            .map(|(_, s)| s.clone())
            .chain(self.calibrations.iter().map(|(_, s)| s.clone()))
            .collect()
    }
}

const GATE_NAME: &str = "qpt_gate";

/// Build the 144 tomography schedules around `gate` plus the four
/// calibration schedules, all through the scheduler.
pub fn qpt_schedules(gate: &Schedule, instmap: &InstructionScheduleMap, policy: SchedulingPolicy) -> Result<QptSet> {
    let map = instmap.register_gate(GATE_NAME, &[0, 1], gate.clone())?;
    let mut experiments = Vec::with_capacity(144);
    for label in TomographyLabel::all() {
        let mut circ = MiniCircuit::new(2);
        for q in 0..2u32 {
            if let Some((g, p)) = label.prep[q as usize].gate() {
                let params: &[f64] = if g == "u3" { &p } else { &[] };
                circ = circ.gate(g, &[q], params);
            }
        }
        circ = circ.gate(GATE_NAME, &[0, 1], &[]);
        for q in 0..2u32 {
            if let Some(p) = label.meas[q as usize].gate() {
                circ = circ.gate("u3", &[q], &p);
            }
        }
        let sched = schedule_circuit(&circ.measure_all(), &map, policy)?;
        experiments.push((label, sched.with_name(label.to_string())));
    }
    let mut calibrations = Vec::with_capacity(4);
    for (idx, name) in CALIBRATION_LABELS.iter().enumerate() {
        let mut circ = MiniCircuit::new(2);
        for q in 0..2u32 {
            if (idx >> q) & 1 == 1 {
                circ = circ.gate("x", &[q], &[]);
            }
        }
        let sched = schedule_circuit(&circ.measure_all(), &map, policy)?;
        calibrations.push((name.to_string(), sched.with_name(*name)));
    }
    Ok(QptSet {
        experiments,
        calibrations,
    })
}

/// Exact outcome distribution of one experiment on a channel given as a
/// column-stacking superoperator; index bit `q` is qubit `q`.
pub fn exact_probabilities(superop: &CMatrix, label: &TomographyLabel) -> Vec<f64> {
    let out = superop * vec_col(&label.input_state());
    let rho = CMatrix::from_column_slice(4, 4, out.as_slice());
    let r = label.rotation();
    let rotated = unitary_superop(&r) * vec_col(&rho);
    (0..4).map(|s| rotated[s + 4 * s].re).collect()
}

/// Simulated tomography run.
#[derive(Debug, Clone, Serialize)]
pub struct QptRun {
    /// Mitigated probabilities per experiment.
    pub data: TomographyData,
    pub assignment: AssignmentMatrix,
    /// Unmitigated distributions, experiments then calibrations.
    pub raw: Vec<Vec<f64>>,
}

fn observed(result: &SimResult) -> Result<Vec<f64>> {
    if result.shots == 0 {
        let p = result.slot_probabilities()?;
        if p.len() != 4 {
            return Err(Error::InvalidData("tomography needs slots 0 and 1".into()));
        }
        return Ok(p);
    }
    let mut p = vec![0.0; 4];
    for shot in result.memory() {
        if shot.len() < 2 {
            return Err(Error::InvalidData("tomography needs slots 0 and 1".into()));
        }
        p[shot[0] as usize + 2 * shot[1] as usize] += 1.0;
    }
    let n = result.shots as f64;
    Ok(p.into_iter().map(|x| x / n).collect())
}

/// Simulate the full set. `shots = 0` uses exact populations and skips
/// mitigation.
pub fn run_qpt(set: &QptSet, backend: &BackendModel, shots: usize, seed: u64) -> Result<QptRun> {
    let results = simulate_batch(&set.schedules(), backend, shots, seed)?;
    let raw: Vec<Vec<f64>> = results.iter().map(observed).collect::<Result<_>>()?;
    let n_exp = set.experiments.len();
    let assignment = if shots == 0 {
        AssignmentMatrix::identity(4)
    } else {
        AssignmentMatrix::from_calibration(&raw[n_exp..])?
    };
    let mut entries = Vec::with_capacity(n_exp);
    for ((label, _), p) in set.experiments.iter().zip(&raw) {
        let q = if shots == 0 { p.clone() } else { mitigate(p, &assignment)? };
        entries.push((*label, q));
    }
    Ok(QptRun {
        data: TomographyData { entries },
        assignment,
        raw,
    })
}
