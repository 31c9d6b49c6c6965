// Copyright 2026 PulseForge Contributors
// SPDX-License-Identifier: Apache-2.0

//! Shot sampling and IQ synthesis.
//!
//! Acquire windows ending at the same cycle form one group. At the group's
//! end time the joint distribution of the acquired qubits is read from
//! `diag(ρ)`, shots are drawn from it, and every shot gets an IQ point per
//! qubit from that qubit's Gaussian for the drawn bit. The state is not
//! collapsed; later evolution continues from the unmeasured `ρ`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::backend::{BackendModel, Cov2};
use super::evolve::{resolve, Propagators, SimOptions, State};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::pulse_ir::Schedule;

#[derive(Debug, Clone, PartialEq)]
pub struct Acquisition {
    /// Cycle at which the group was read out.
    pub time: u64,
    /// Acquired qubits, ascending, with their memory slots.
    pub qubits: Vec<u32>,
    pub slots: Vec<u32>,
    /// Exact joint distribution; outcome index bit `k` is `qubits[k]`.
    pub probabilities: Vec<f64>,
    /// Level-1 data, `iq[k][shot]` for `qubits[k]`.
    pub iq: Vec<Vec<Complex64>>,
    /// Level-2 data, `bits[k][shot]`.
    pub bits: Vec<Vec<u8>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub rho: CMatrix,
    pub shots: usize,
    pub acquisitions: Vec<Acquisition>,
}

impl SimResult {
    /// Per-shot level-2 memory, indexed `[shot][slot]`, covering slots up
    /// to the highest written. Unwritten slots read 0.
    pub fn memory(&self) -> Vec<Vec<u8>> {
        let width = self
            .acquisitions
            .iter()
            .flat_map(|a| a.slots.iter())
            .map(|&s| s as usize + 1)
            .max()
            .unwrap_or(0);
        let mut mem = vec![vec![0u8; width]; self.shots];
        for a in &self.acquisitions {
            for (k, &slot) in a.slots.iter().enumerate() {
                for (shot, &b) in a.bits[k].iter().enumerate() {
                    mem[shot][slot as usize] = b;
                }
            }
        }
        mem
    }

    /// Counts keyed by bitstring, highest slot leftmost.
    pub fn counts(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for shot in self.memory() {
            let key: String = shot.iter().rev().map(|b| if *b == 1 { '1' } else { '0' }).collect();
            *out.entry(key).or_insert(0) += 1;
        }
        out
    }

    /// Exact distribution over memory slots `0..width` when all slots were
    /// acquired in a single group; index bit `s` is slot `s`.
    pub fn slot_probabilities(&self) -> Result<Vec<f64>> {
        let [a] = self.acquisitions.as_slice() else {
            return Err(Error::InvalidData("exact slot distribution needs exactly one acquisition group".into()));
        };
        let width = a.slots.iter().map(|&s| s as usize + 1).max().unwrap_or(0);
        let mut out = vec![0.0; 1 << width];
        for (m, p) in a.probabilities.iter().enumerate() {
            let mut idx = 0;
            for (k, &slot) in a.slots.iter().enumerate() {
                if (m >> k) & 1 == 1 {
                    idx |= 1 << slot;
                }
            }
            out[idx] += p;
        }
        Ok(out)
    }
}

fn marginal(rho: &CMatrix, qubits: &[u32]) -> Vec<f64> {
    let mut p = vec![0.0; 1 << qubits.len()];
    for b in 0..rho.nrows() {
        let mut m = 0;
        for (k, &q) in qubits.iter().enumerate() {
            if (b >> q) & 1 == 1 {
                m |= 1 << k;
            }
        }
        p[m] += rho[(b, b)].re.max(0.0);
    }
    let total: f64 = p.iter().sum();
    if total > 0.0 {
        for v in &mut p {
            *v /= total;
        }
    }
    p
}

fn gaussian_iq(rng: &mut ChaCha8Rng, mean: Complex64, cov: &Cov2) -> Complex64 {
    let z1: f64 = rng.sample(StandardNormal);
    let z2: f64 = rng.sample(StandardNormal);
    let l11 = cov[0][0].max(0.0).sqrt();
    let l21 = if l11 > 0.0 { cov[1][0] / l11 } else { 0.0 };
    let l22 = (cov[1][1] - l21 * l21).max(0.0).sqrt();
    Complex64::new(mean.re + l11 * z1, mean.im + l21 * z1 + l22 * z2)
}

/// Simulate with a caller-owned propagator cache.
pub fn simulate_with(props: &mut Propagators<'_>, schedule: &Schedule, shots: usize, rng: &mut ChaCha8Rng) -> Result<SimResult> {
    let backend = props.backend();
    let d = backend.dim();
    let pre = resolve(schedule, backend, &[])?;
    let mut groups: BTreeMap<u64, Vec<(u32, u32)>> = BTreeMap::new();
    for (ch, w) in &pre.acquires {
        groups.entry(w.start + w.duration).or_default().push((ch.index, w.slot));
    }
    let cuts: Vec<u64> = groups.keys().copied().collect();
    let ctl = resolve(schedule, backend, &cuts)?;

    let mut state = State::ground(backend, props.unitary());
    let mut acquisitions = Vec::new();
    let mut pending = groups.into_iter().peekable();
    let mut emit = |t: u64, members: Vec<(u32, u32)>, rho: &CMatrix, rng: &mut ChaCha8Rng| {
        let mut members = members;
        members.sort();
        let qubits: Vec<u32> = members.iter().map(|m| m.0).collect();
        let slots: Vec<u32> = members.iter().map(|m| m.1).collect();
        let probabilities = marginal(rho, &qubits);
        let k = qubits.len();
        let mut iq = vec![Vec::with_capacity(shots); k];
        let mut bits = vec![Vec::with_capacity(shots); k];
        for _ in 0..shots {
            let u: f64 = rng.random();
            let mut acc = 0.0;
            let mut outcome = probabilities.len() - 1;
            for (m, p) in probabilities.iter().enumerate() {
                acc += p;
                if u < acc {
                    outcome = m;
                    break;
                }
            }
            for (j, &q) in qubits.iter().enumerate() {
                let b = (outcome >> j) & 1;
                let r = &backend.readout[q as usize];
                let z = gaussian_iq(rng, r.mean[b], &r.cov[b]);
                bits[j].push(backend.discriminators[q as usize].classify(z));
                iq[j].push(z);
            }
        }
        acquisitions.push(Acquisition {
            time: t,
            qubits,
            slots,
            probabilities,
            iq,
            bits,
        });
    };

    for run in &ctl.runs {
        while let Some(&(t, _)) = pending.peek() {
            if t <= run.start {
                let (t, members) = pending.next().expect("peeked");
                emit(t, members, &state.density(d), rng);
            } else {
                break;
            }
        }
        let p = props.run_propagator(&ctl.channels, run);
        state.apply(p);
    }
    let rho = state.density(d);
    for (t, members) in pending {
        emit(t, members, &rho, rng);
    }
    Ok(SimResult {
        rho,
        shots,
        acquisitions,
    })
}

/// Simulate one schedule from `|0…0⟩`. Deterministic in `seed`.
pub fn simulate(schedule: &Schedule, backend: &BackendModel, shots: usize, seed: u64) -> Result<SimResult> {
    let mut props = Propagators::new(backend, SimOptions::default());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    simulate_with(&mut props, schedule, shots, &mut rng)
}

/// Simulate many schedules in parallel. Schedule `i` draws from stream `i`
/// of the seeded generator, so results do not depend on thread count.
pub fn simulate_batch(schedules: &[Schedule], backend: &BackendModel, shots: usize, seed: u64) -> Result<Vec<SimResult>> {
    schedules
        .par_iter()
        .enumerate()
        .map_init(
            || Propagators::new(backend, SimOptions::default()),
            |props, (i, s)| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(i as u64);
                simulate_with(props, s, shots, &mut rng)
            },
        )
        .collect()
}
