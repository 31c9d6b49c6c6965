// Copyright 2026 PulseForge Contributors
// SPDX-License-Identifier: Apache-2.0

//! Average gate fidelity and local-rotation optimization around an
//! entangling channel.
//!
//! A channel `E` realizes a target `U` up to local corrections when some
//! single-qubit rotations before and after it bring `Post·E·Pre` close to
//! `U`. Equivalently `E` is compared against `Post†·U·Pre†`, with both
//! layers parameterized by two `U3` blocks each (12 angles in total).

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use argmin::core::{CostFunction, Executor, TerminationReason, TerminationStatus};
use argmin::solver::neldermead::NelderMead;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, expm, kron, pauli_string, unitary_superop, CMatrix};
use crate::pulse_ir::Schedule;
use crate::scheduler::{schedule_circuit, InstructionScheduleMap, MiniCircuit, SchedulingPolicy};

/// `U3(θ, φ, λ) = Rz(φ)·Ry(θ)·Rz(λ)` up to global phase.
pub fn u3(theta: f64, phi: f64, lambda: f64) -> CMatrix {
    let (co, si) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    CMatrix::from_row_slice(
        2,
        2,
        &[
            c(co, 0.0),
            -Complex64::from_polar(si, lambda),
            Complex64::from_polar(si, phi),
            Complex64::from_polar(co, phi + lambda),
        ],
    )
}

/// `F = (d·F_pro + 1)/(d + 1)` with `F_pro = Tr[S_U† S_E]/d²`.
pub fn average_gate_fidelity(channel: &CMatrix, target: &CMatrix) -> Result<f64> {
    let d = target.nrows();
    if !target.is_square() || channel.nrows() != d * d || channel.ncols() != d * d {
        return Err(Error::Dimension {
            expected: d * d,
            actual: channel.nrows(),
        });
    }
    Ok(fidelity_unchecked(channel, target))
}

fn fidelity_unchecked(channel: &CMatrix, target: &CMatrix) -> f64 {
    let d = target.nrows() as f64;
    let su = unitary_superop(target);
    let f_pro = su.iter().zip(channel.iter()).map(|(a, b)| (a.conj() * b).re).sum::<f64>() / (d * d);
    (d * f_pro + 1.0) / (d + 1.0)
}

/// Optimization target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    /// CNOT with qubit 1 as control.
    Cx,
    /// CNOT with qubit 0 as control.
    Cx01,
    /// `exp(−iπ ZX/4)`.
    Zx90,
}

impl Target {
    pub fn unitary(self) -> CMatrix {
        let p0 = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let p1 = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let id = CMatrix::identity(2, 2);
        let x = pauli_string("X").expect("static");
        match self {
            Target::Cx => kron(&p0, &id) + kron(&p1, &x),
            Target::Cx01 => kron(&id, &p0) + kron(&x, &p1),
            Target::Zx90 => expm(&(pauli_string("ZX").expect("static") * c(0.0, -PI / 4.0))),
        }
    }

    /// `(control, target)` of a CNOT target.
    pub fn orientation(self) -> Option<(u32, u32)> {
        match self {
            Target::Cx => Some((1, 0)),
            Target::Cx01 => Some((0, 1)),
            Target::Zx90 => None,
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Target::Cx => "cx",
            Target::Cx01 => "cx01",
            Target::Zx90 => "zx90",
        })
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cx" | "cx10" => Ok(Target::Cx),
            "cx01" => Ok(Target::Cx01),
            "zx90" => Ok(Target::Zx90),
            other => Err(Error::InvalidData(format!("unknown target '{other}' (cx, cx01, zx90)"))),
        }
    }
}

/// Twelve angles: `U3` blocks for pre-q1, pre-q0, post-q1, post-q0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalRotations {
    pub theta: [f64; 12],
}

impl LocalRotations {
    pub const ZERO: LocalRotations = LocalRotations { theta: [0.0; 12] };

    pub fn block(&self, k: usize) -> [f64; 3] {
        [self.theta[3 * k], self.theta[3 * k + 1], self.theta[3 * k + 2]]
    }

    fn layer(&self, first: usize) -> CMatrix {
        let [a, b, cc] = self.block(first);
        let [d, e, f] = self.block(first + 1);
        kron(&u3(a, b, cc), &u3(d, e, f))
    }

    pub fn pre(&self) -> CMatrix {
        self.layer(0)
    }

    pub fn post(&self) -> CMatrix {
        self.layer(2)
    }

    /// Unitary the bare channel is compared against: `Post†·U·Pre†`.
    pub fn corrected_target(&self, target: &CMatrix) -> CMatrix {
        self.post().adjoint() * target * self.pre().adjoint()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityReport {
    pub target: Target,
    pub f_max: f64,
    /// Fidelity at `Θ = 0`.
    pub f_zero: f64,
    pub rotations: LocalRotations,
    pub restarts: usize,
    pub converged: bool,
}

struct Objective<'a> {
    channel: &'a CMatrix,
    target: &'a CMatrix,
}

impl CostFunction for Objective<'_> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, p: &Vec<f64>) -> std::result::Result<f64, argmin::core::Error> {
        let mut theta = [0.0; 12];
        theta.copy_from_slice(p);
        let v = LocalRotations { theta }.corrected_target(self.target);
        Ok(1.0 - fidelity_unchecked(self.channel, &v))
    }
}

const SD_TOL: f64 = 1e-9;
const MAX_ITERS: u64 = 20_000;
const STEP: f64 = 0.6;

fn nelder_mead(obj: Objective<'_>, start: [f64; 12]) -> Result<([f64; 12], f64, bool)> {
    let mut simplex = vec![start.to_vec()];
    for k in 0..12 {
        let mut v = start.to_vec();
        v[k] += STEP;
        simplex.push(v);
    }
    let solver = NelderMead::new(simplex)
        .with_sd_tolerance(SD_TOL)
        .map_err(|e| Error::NoConvergence(e.to_string()))?;
    let res = Executor::new(obj, solver)
        .configure(|s| s.max_iters(MAX_ITERS))
        .run()
        .map_err(|e| Error::NoConvergence(format!("simplex search: {e}")))?;
    let best = res
        .state
        .best_param
        .ok_or_else(|| Error::NoConvergence("simplex search returned no point".into()))?;
    let converged = matches!(
        res.state.termination_status,
        TerminationStatus::Terminated(TerminationReason::SolverConverged)
    );
    let mut theta = [0.0; 12];
    theta.copy_from_slice(&best);
    Ok((theta, res.state.best_cost, converged))
}

/// Maximize the average gate fidelity of `channel` against
/// `Post†·target·Pre†` from the zero start plus `restarts` random starts.
/// Every start is polished by a second simplex run from its optimum.
pub fn optimize_local(channel: &CMatrix, target: Target, restarts: usize, seed: u64) -> Result<FidelityReport> {
    let u = target.unitary();
    if channel.nrows() != 16 || channel.ncols() != 16 {
        return Err(Error::Dimension {
            expected: 16,
            actual: channel.nrows(),
        });
    }
    let f_zero = fidelity_unchecked(channel, &u);
    let starts: Vec<[f64; 12]> = (0..=restarts)
        .map(|k| {
            if k == 0 {
                return [0.0; 12];
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let mut s = [0.0; 12];
            for v in &mut s {
                *v = rng.random_range(-PI..PI);
            }
            s
        })
        .collect();
    let results: Vec<([f64; 12], f64, bool)> = starts
        .par_iter()
        .map(|s| {
            let (p, _, _) = nelder_mead(Objective { channel, target: &u }, *s)?;
            nelder_mead(Objective { channel, target: &u }, p)
        })
        .collect::<Result<_>>()?;
    let mut best = 0;
    for (k, r) in results.iter().enumerate() {
        if r.1 < results[best].1 {
            best = k;
        }
    }
    let (theta, cost, converged) = results[best];
    let mut f_max = 1.0 - cost;
    let mut rotations = LocalRotations { theta };
    if f_max < f_zero {
        f_max = f_zero;
        rotations = LocalRotations::ZERO;
    }
    Ok(FidelityReport {
        target,
        f_max,
        f_zero,
        rotations,
        restarts,
        converged,
    })
}

const CR_GATE: &str = "cr";

/// Assemble `pre-rotations → CR → post-rotations` from `U3` templates and
/// register it as `cx` on `(control, target)`. Returns the schedule and the
/// updated map.
pub fn build_optimized_cnot(
    instmap: &InstructionScheduleMap,
    cr_schedule: &Schedule,
    rotations: &LocalRotations,
    orientation: (u32, u32),
) -> Result<(Schedule, InstructionScheduleMap)> {
    let map = instmap.register_gate(CR_GATE, &[0, 1], cr_schedule.clone())?;
    let mut circ = MiniCircuit::new(2);
    // Blocks are ordered qubit 1 then qubit 0 within each layer.
    for (k, q) in [(0usize, 1u32), (1, 0)] {
        circ = circ.gate("u3", &[q], &rotations.block(k));
    }
    circ = circ.gate(CR_GATE, &[0, 1], &[]);
    for (k, q) in [(2usize, 1u32), (3, 0)] {
        circ = circ.gate("u3", &[q], &rotations.block(k));
    }
    let sched = schedule_circuit(&circ, &map, SchedulingPolicy::Alap)?.with_name("cx");
    let (ctl, tgt) = orientation;
    let out = map.register_gate("cx", &[ctl, tgt], sched.clone())?;
    Ok((sched, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::frobenius;

    #[test]
    fn u3_is_unitary_and_matches_rotations() {
        let u = u3(0.7, -1.1, 2.3);
        assert!(frobenius(&(&u * u.adjoint() - CMatrix::identity(2, 2))) < 1e-12);
        // U3(θ, 0, 0) = Ry(θ).
        let ry = expm(&(pauli_string("Y").unwrap() * c(0.0, -0.35)));
        assert!(frobenius(&(u3(0.7, 0.0, 0.0) - ry)) < 1e-12);
    }

    #[test]
    fn channel_equal_to_target_has_unit_fidelity() {
        let u = Target::Cx.unitary();
        let f = average_gate_fidelity(&unitary_superop(&u), &u).unwrap();
        assert!((f - 1.0).abs() < 1e-12);
    }

    #[test]
    fn local_error_lowers_fidelity() {
        let u = Target::Zx90.unitary();
        let v = kron(&u3(0.2, 0.0, 0.0), &CMatrix::identity(2, 2));
        let f = average_gate_fidelity(&unitary_superop(&(v * &u)), &u).unwrap();
        assert!(f < 1.0 - 1e-3);
    }

    #[test]
    fn dimension_checked() {
        assert!(average_gate_fidelity(&CMatrix::identity(4, 4), &Target::Cx.unitary()).is_err());
    }

    #[test]
    fn target_names_round_trip() {
        for t in [Target::Cx, Target::Cx01, Target::Zx90] {
            assert_eq!(t.to_string().parse::<Target>().unwrap(), t);
        }
    }
}
