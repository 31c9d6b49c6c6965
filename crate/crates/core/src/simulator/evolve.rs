// Copyright 2026 PulseForge Contributors
// SPDX-License-Identifier: Apache-2.0

//! Piecewise-constant propagation.
//!
//! Controls are constant over each cycle. Consecutive cycles with identical
//! control values merge into one run whose propagator is a single matrix
//! exponential. Propagators are cached by the exact bit pattern of the
//! controls and the run length, so repeated pulses cost one exponential.
//! Without dissipators the engine works with `d×d` unitaries, otherwise with
//! `d²×d²` Lindblad superoperators.

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;

use super::backend::BackendModel;
use crate::codegen;
use crate::error::{Error, Result};
use crate::linalg::{dissipator_superop, expm, hamiltonian_superop, identity, unitary_superop, CMatrix, CVector};
use crate::pulse_ir::{ChannelId, ChannelKind, Entry, Instruction, Schedule};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimOptions {
    /// Split every cycle into this many equal substeps.
    pub substeps: u32,
}

impl Default for SimOptions {
    fn default() -> Self {
        Self { substeps: 1 }
    }
}

/// A run of cycles `[start, start + len)` with constant controls.
#[derive(Debug, Clone)]
pub(crate) struct Run {
    pub start: u64,
    pub len: u64,
    pub controls: Vec<Complex64>,
}

/// Resolved control streams for one schedule.
pub(crate) struct Controls {
    pub channels: Vec<ChannelId>,
    pub runs: Vec<Run>,
    pub acquires: Vec<(ChannelId, codegen::AcquireWindow)>,
    /// Net frame phase per drive channel at the end of the schedule.
    pub net_phase: BTreeMap<ChannelId, f64>,
}

fn key_bits(v: &[Complex64]) -> Vec<u64> {
    v.iter().flat_map(|z| [z.re.to_bits(), z.im.to_bits()]).collect()
}

/// Rewrite absolute `SetFrequency` values into the simulation frame.
fn to_sim_frame(schedule: &Schedule, backend: &BackendModel) -> Schedule {
    if !backend.rwa {
        return schedule.clone();
    }
    let entries = schedule
        .entries()
        .iter()
        .map(|e| match &e.instruction {
            Instruction::SetFrequency { frequency, channel } => {
                let ff = backend.channels.get(channel).map(|t| t.frame_frequency).unwrap_or(0.0);
                Entry {
                    start: e.start,
                    instruction: Instruction::SetFrequency {
                        frequency: frequency - ff,
                        channel: *channel,
                    },
                }
            }
            _ => e.clone(),
        })
        .collect();
    Schedule::from_entries_unchecked(schedule.name(), entries)
}

pub(crate) fn resolve(schedule: &Schedule, backend: &BackendModel, breakpoints: &[u64]) -> Result<Controls> {
    for e in schedule.entries() {
        if let Instruction::Barrier { .. } = e.instruction {
            continue;
        }
        for ch in e.instruction.channels() {
            match ch.kind {
                ChannelKind::Drive | ChannelKind::Control => {
                    if !backend.channels.contains_key(ch) {
                        return Err(Error::UnboundChannel(*ch));
                    }
                }
                ChannelKind::Acquire => {
                    if ch.index as usize >= backend.n_qubits {
                        return Err(Error::UnboundChannel(*ch));
                    }
                }
                ChannelKind::Measure => {}
            }
        }
    }
    let sched = to_sim_frame(schedule, backend);
    let programs = codegen::lower(&sched, backend.dt, &backend.codegen_frequencies(&sched))?;
    let channels: Vec<ChannelId> = programs.keys().copied().filter(|c| backend.channels.contains_key(c)).collect();

    let mut runs: Vec<Run> = Vec::new();
    let mut cuts: Vec<u64> = breakpoints.to_vec();
    cuts.sort_unstable();
    let mut next_cut = cuts.into_iter().peekable();
    let mut last_key: Option<Vec<u64>> = None;
    for t in 0..sched.duration() {
        let mut forced = false;
        while let Some(&c) = next_cut.peek() {
            if c <= t {
                forced |= c == t;
                next_cut.next();
            } else {
                break;
            }
        }
        let controls: Vec<Complex64> = channels.iter().map(|c| programs[c].signal[t as usize]).collect();
        let key = key_bits(&controls);
        match (runs.last_mut(), &last_key) {
            (Some(run), Some(k)) if !forced && *k == key => run.len += 1,
            _ => {
                runs.push(Run { start: t, len: 1, controls });
                last_key = Some(key);
            }
        }
    }

    let acquires = programs
        .iter()
        .flat_map(|(ch, p)| p.acquire_windows.iter().map(move |w| (*ch, *w)))
        .collect();

    let mut net_phase = BTreeMap::new();
    for e in schedule.entries() {
        if let Instruction::ShiftPhase { phase, channel } = e.instruction {
            *net_phase.entry(channel).or_insert(0.0) += phase;
        }
    }
    Ok(Controls {
        channels,
        runs,
        acquires,
        net_phase,
    })
}

/// Propagator cache bound to one backend.
pub struct Propagators<'a> {
    backend: &'a BackendModel,
    options: SimOptions,
    dissipator: Option<CMatrix>,
    cache: HashMap<(Vec<ChannelId>, Vec<u64>, u64), CMatrix>,
}

impl<'a> Propagators<'a> {
    pub fn new(backend: &'a BackendModel, options: SimOptions) -> Self {
        let dissipator = if backend.is_unitary() {
            None
        } else {
            let d2 = backend.dim() * backend.dim();
            let mut s = CMatrix::zeros(d2, d2);
            for (a, rate) in &backend.dissipators {
                s += dissipator_superop(a, *rate);
            }
            Some(s)
        };
        Self {
            backend,
            options,
            dissipator,
            cache: HashMap::new(),
        }
    }

    pub fn backend(&self) -> &'a BackendModel {
        self.backend
    }

    /// True when propagators are `d×d` unitaries.
    pub fn unitary(&self) -> bool {
        self.dissipator.is_none()
    }

    pub fn hamiltonian(&self, channels: &[ChannelId], controls: &[Complex64]) -> CMatrix {
        let b = self.backend;
        let mut h = b.h_sys.clone();
        for (ch, &c) in channels.iter().zip(controls) {
            let t = &b.channels[ch];
            let a2 = c.norm_sqr();
            let mut add = |m: &Option<CMatrix>, s: f64| {
                if let Some(m) = m {
                    if s != 0.0 {
                        h += m * Complex64::new(s, 0.0);
                    }
                }
            };
            add(&t.h_i, c.re);
            add(&t.h_abs2, a2);
            add(&t.h_abs2_i, a2 * c.re);
            if b.rwa {
                add(&t.h_q, c.im);
                add(&t.h_abs2_q, a2 * c.im);
            }
        }
        h
    }

    /// Lindblad generator superoperator (or `−iH` on the unitary path).
    pub fn generator(&self, channels: &[ChannelId], controls: &[Complex64]) -> CMatrix {
        let h = self.hamiltonian(channels, controls);
        match &self.dissipator {
            None => h * Complex64::new(0.0, -1.0),
            Some(d) => hamiltonian_superop(&h) + d,
        }
    }

    pub(crate) fn run_propagator(&mut self, channels: &[ChannelId], run: &Run) -> &CMatrix {
        let key = (channels.to_vec(), key_bits(&run.controls), run.len);
        if !self.cache.contains_key(&key) {
            let g = self.generator(channels, &run.controls);
            let dt = self.backend.dt;
            let p = if self.options.substeps <= 1 {
                expm(&(g * Complex64::new(dt * run.len as f64, 0.0)))
            } else {
                let m = self.options.substeps as u64;
                let step = expm(&(g * Complex64::new(dt / m as f64, 0.0)));
                matrix_power(&step, run.len * m)
            };
            self.cache.insert(key.clone(), p);
        }
        &self.cache[&key]
    }

    pub fn cache_len(&self) -> usize {
        self.cache.len()
    }

    /// Whole-schedule propagator: `d×d` unitary or `d²×d²` superoperator.
    pub fn schedule_propagator(&mut self, schedule: &Schedule) -> Result<CMatrix> {
        let ctl = resolve(schedule, self.backend, &[])?;
        let n = if self.unitary() {
            self.backend.dim()
        } else {
            self.backend.dim() * self.backend.dim()
        };
        let mut total = identity(n);
        for run in &ctl.runs {
            let p = self.run_propagator(&ctl.channels, run);
            total = p * total;
        }
        Ok(total)
    }

    /// Process superoperator of the schedule (column-stacking convention).
    pub fn superoperator(&mut self, schedule: &Schedule) -> Result<CMatrix> {
        let p = self.schedule_propagator(schedule)?;
        Ok(if self.unitary() { unitary_superop(&p) } else { p })
    }
}

fn matrix_power(m: &CMatrix, mut k: u64) -> CMatrix {
    let mut result = identity(m.nrows());
    let mut base = m.clone();
    while k > 0 {
        if k & 1 == 1 {
            result = &base * &result;
        }
        base = &base * &base;
        k >>= 1;
    }
    result
}

/// Evolving state: a pure state vector on the unitary path, `vec(ρ)`
/// otherwise.
pub(crate) enum State {
    Pure(CVector),
    Mixed(CVector),
}

impl State {
    pub fn ground(backend: &BackendModel, unitary: bool) -> Self {
        let d = backend.dim();
        if unitary {
            let mut psi = CVector::zeros(d);
            psi[0] = Complex64::new(1.0, 0.0);
            State::Pure(psi)
        } else {
            let mut v = CVector::zeros(d * d);
            v[0] = Complex64::new(1.0, 0.0);
            State::Mixed(v)
        }
    }

    pub fn apply(&mut self, p: &CMatrix) {
        match self {
            State::Pure(v) | State::Mixed(v) => *v = p * &*v,
        }
    }

    pub fn density(&self, d: usize) -> CMatrix {
        match self {
            State::Pure(psi) => psi * psi.adjoint(),
            State::Mixed(v) => CMatrix::from_column_slice(d, d, v.as_slice()),
        }
    }
}

/// Superoperator of the schedule under `backend`.
pub fn evolve_superoperator(schedule: &Schedule, backend: &BackendModel) -> Result<CMatrix> {
    Propagators::new(backend, SimOptions::default()).superoperator(schedule)
}

/// Superoperator with the net virtual-Z frame of each qubit undone, i.e.
/// the logical channel as seen by later pulses on the same frames.
pub fn frame_corrected_superoperator(schedule: &Schedule, backend: &BackendModel) -> Result<CMatrix> {
    let mut props = Propagators::new(backend, SimOptions::default());
    let s = props.superoperator(schedule)?;
    let ctl = resolve(schedule, backend, &[])?;
    let n = backend.n_qubits;
    let mut rz = identity(1);
    for q in (0..n as u32).rev() {
        let psi = ctl.net_phase.get(&ChannelId::drive(q)).copied().unwrap_or(0.0);
        // Physical = Rz(Ψ)·logical, so apply Rz(−Ψ) = diag(e^{iΨ/2}, e^{−iΨ/2}).
        let m = CMatrix::from_diagonal(&CVector::from_vec(vec![
            Complex64::from_polar(1.0, psi / 2.0),
            Complex64::from_polar(1.0, -psi / 2.0),
        ]));
        rz = rz.kronecker(&m);
    }
    Ok(unitary_superop(&rz) * s)
}
