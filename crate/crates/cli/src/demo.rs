// Copyright 2026 PulseForge Contributors
// SPDX-License-Identifier: Apache-2.0

//! End-to-end cross-resonance calibration on the simulated device.
//!
//! Stages: phase calibration, tomography per amplitude, coefficient
//! extraction, third-order fit, π/2 amplitude, local optimization, CNOT
//! tomography, readout characterization. Every stage draws its seed from
//! `--seed` through [`stage_seed`].

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use pulseforge_core::fidelity_opt::{average_gate_fidelity, build_optimized_cnot, optimize_local, Target};
use pulseforge_core::hamiltonian_est::{
    calibrate_cr_phase, cr1_schedule, cr2_schedule, cr_pulse, fit_third_order, solve_pi_half_amplitude, CrDevice,
    HamiltonianCoefficients,
};
use pulseforge_core::pulse_ir::json::schedule_to_json;
use pulseforge_core::scheduler::{InstructionScheduleMap, SchedulingPolicy};
use pulseforge_core::simulator::{frame_corrected_superoperator, simulate, BackendModel};
use pulseforge_core::tomography::{fit_choi, qpt_schedules, run_qpt, ChoiMatrix};
use pulseforge_core::{Pulse, Schedule};
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::commands::{choi_document, coefficient_header, coefficient_row, iq_records, load_instmap};
use crate::iq::{readout_report, IqRecord, ReadoutReport};
use crate::output::{num, OutputSet, RunManifest};

/// Stage-1 sweeps of the phase calibration.
const CAL_AMPLITUDES: (f64, f64, f64) = (0.005, 0.2, 0.005);
const CAL_PHASES: (f64, f64, f64) = (-0.5, 0.5, 0.01);
const READOUT_SHOTS: usize = 1024;

mod stage {
    pub const QPT_SWEEP: u64 = 1;
    pub const QPT_CR: u64 = 2;
    pub const OPTIMIZE: u64 = 3;
    pub const QPT_CNOT: u64 = 4;
    pub const READOUT: u64 = 5;
}

#[derive(Debug, Clone, Args)]
pub struct DemoArgs {
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, default_value_t = 2048)]
    pub shots: usize,
    /// Device parameters as JSON; omitted fields take the defaults.
    #[arg(long)]
    pub backend: Option<PathBuf>,
    /// Gate map overriding the device's calibrated single-qubit gates.
    #[arg(long)]
    pub instmap: Option<PathBuf>,
    #[arg(long, default_value = "demo-cr-out")]
    pub out_dir: PathBuf,
    /// Use the echoed two-pulse CR sequence.
    #[arg(long)]
    pub echo: bool,
    /// CR amplitudes as `start:stop:step` (inclusive) or a comma list.
    #[arg(long, default_value = "0.025:0.25:0.025")]
    pub amplitudes: String,
    #[arg(long, default_value_t = 8)]
    pub restarts: usize,
}

/// Parse `start:stop:step` (stop inclusive up to rounding) or `a,b,c`.
pub fn parse_range(spec: &str) -> Result<Vec<f64>> {
    let parse = |s: &str| -> Result<f64> { s.trim().parse().with_context(|| format!("bad number '{s}' in '{spec}'")) };
    let parts: Vec<&str> = spec.split(':').collect();
    let v: Vec<f64> = match parts.as_slice() {
        [a, b, step] => {
            let (a, b, step) = (parse(a)?, parse(b)?, parse(step)?);
            if !(step > 0.0) || b < a {
                bail!("range '{spec}' needs start ≤ stop and a positive step");
            }
            let n = ((b - a) / step + 1e-9).floor() as usize;
            (0..=n).map(|k| a + k as f64 * step).collect()
        }
        [_] => spec.split(',').map(parse).collect::<Result<_>>()?,
        _ => bail!("range '{spec}' is neither start:stop:step nor a comma list"),
    };
    if v.iter().any(|x| !x.is_finite()) {
        bail!("range '{spec}' has non-finite values");
    }
    Ok(v)
}

/// Seed for `(stage, index)` derived from the run seed by SHA-256.
pub fn stage_seed(seed: u64, stage: u64, index: u64) -> u64 {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(stage.to_le_bytes());
    h.update(index.to_le_bytes());
    let d = h.finalize();
    u64::from_le_bytes(d[..8].try_into().expect("32-byte digest"))
}

fn triple(r: (f64, f64, f64)) -> Vec<f64> {
    let n = ((r.1 - r.0) / r.2 + 1e-9).floor() as usize;
    (0..=n).map(|k| r.0 + k as f64 * r.2).collect()
}

#[derive(Debug, Serialize)]
pub struct DemoSummary {
    pub seed: u64,
    pub shots: usize,
    pub echo: bool,
    pub n_cr: u32,
    pub phi_opt: f64,
    pub a_opt: f64,
    pub fit_j: f64,
    pub fit_lambda: f64,
    pub pi_half_a_bar: f64,
    pub pi_half_amplitude: f64,
    pub f_max: f64,
    pub f_zero: f64,
    /// Average gate fidelity of the tomographic CNOT estimate.
    pub cnot_fidelity_qpt: f64,
    /// Average gate fidelity of the simulated CNOT channel itself.
    pub cnot_fidelity_exact: f64,
    pub assignment_fidelity: Vec<f64>,
}

struct Ctx<'a> {
    dev: &'a CrDevice,
    backend: &'a BackendModel,
    map: &'a InstructionScheduleMap,
    echo: bool,
    shots: usize,
}

impl Ctx<'_> {
    fn n_cr(&self) -> u32 {
        if self.echo {
            2
        } else {
            1
        }
    }

    fn cr(&self, amp: f64, phase: f64) -> Result<Schedule> {
        Ok(if self.echo {
            cr2_schedule(self.dev, amp, phase)?
        } else {
            cr1_schedule(self.dev, amp, phase)?
        })
    }

    fn qpt(&self, gate: &Schedule, seed: u64) -> Result<ChoiMatrix> {
        let set = qpt_schedules(gate, self.map, SchedulingPolicy::Alap)?;
        let run = run_qpt(&set, self.backend, self.shots, seed)?;
        Ok(fit_choi(&run.data)?)
    }
}

/// Mean amplitude of a CR pulse per unit drive amplitude.
fn mean_per_unit(dev: &CrDevice) -> Result<f64> {
    Ok(Pulse::from(cr_pulse(dev, 1.0, 0.0)?).mean_amplitude())
}

pub fn run_demo(a: &DemoArgs) -> Result<DemoSummary> {
    let mut m = RunManifest::new("demo-cr", Some(a.seed));
    m.arg("shots", a.shots)
        .arg("echo", a.echo)
        .arg("amplitudes", &a.amplitudes)
        .arg("restarts", a.restarts);
    let amplitudes = parse_range(&a.amplitudes)?;
    if amplitudes.len() < 2 || amplitudes.iter().any(|&x| !(x > 0.0 && x <= 1.0)) {
        bail!("need at least two amplitudes in (0, 1]");
    }
    let dev = match &a.backend {
        Some(p) => serde_json::from_str::<CrDevice>(&m.input_text(p)?)
            .with_context(|| format!("parsing device {}", p.display()))?,
        None => CrDevice::default(),
    };
    let backend = dev.backend().context("compiling device model")?;
    let map = match &a.instmap {
        Some(p) => load_instmap(&mut m, p)?,
        None => backend.default_instmap()?,
    };
    let ctx = Ctx {
        dev: &dev,
        backend: &backend,
        map: &map,
        echo: a.echo,
        shots: a.shots,
    };
    let mut out = OutputSet::new(&a.out_dir, m);
    out.write_json("device.json", &dev)?;

    eprintln!("[1/8] CR phase calibration");
    let cal = calibrate_cr_phase(&backend, &dev, &triple(CAL_AMPLITUDES), &triple(CAL_PHASES))
        .context("stage phase calibration")?;
    out.write_json("phase_calibration.json", &cal)?;
    let rows: Vec<Vec<String>> = cal.phase_sweep.iter().map(|p| vec![num(p.phi), num(p.y0), num(p.y1)]).collect();
    out.write_csv("phase_sweep.csv", &["phi", "y_control0", "y_control1"], &rows)?;
    let phi = cal.phi_opt;

    eprintln!("[2/8] tomography at {} amplitudes", amplitudes.len());
    let unit = mean_per_unit(&dev)?;
    let t_cr = dev.t_cr();
    let mut coeffs = Vec::new();
    for (k, &amp) in amplitudes.iter().enumerate() {
        eprintln!("      A = {amp:.4}");
        let gate = ctx.cr(amp, phi)?;
        let choi = ctx
            .qpt(&gate, stage_seed(a.seed, stage::QPT_SWEEP, k as u64))
            .with_context(|| format!("stage amplitude tomography at A = {amp}"))?;
        let a_bar = amp * unit;
        let doc = choi_document(
            &choi,
            &[("a_bar", json!(a_bar)), ("amplitude", json!(amp)), ("n_cr", json!(ctx.n_cr()))],
        )?;
        out.write(&format!("choi/amp_{k:02}.json"), doc.as_bytes())?;
        let h = HamiltonianCoefficients::from_superop(&choi.to_superop(), a_bar, t_cr, ctx.n_cr())
            .with_context(|| format!("stage coefficient extraction at A = {amp}"))?;
        coeffs.push(h);
    }
    eprintln!("[3/8] coefficient table");
    let header = coefficient_header();
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let rows: Vec<Vec<String>> = coeffs.iter().map(coefficient_row).collect();
    out.write_csv("coefficients.csv", &header, &rows)?;

    eprintln!("[4/8] third-order fit");
    let pts: Vec<(f64, f64)> = coeffs.iter().map(|h| (h.a_bar, h.zx())).collect();
    let fit = fit_third_order(&pts, dev.delta, dev.anharm).context("stage third-order fit")?;
    out.write_json("third_order_fit.json", &fit)?;
    let curve: Vec<Vec<String>> = (0..=100)
        .map(|k| {
            let x = amplitudes[amplitudes.len() - 1] * unit * k as f64 / 100.0;
            vec![num(x), num(fit.omega_zx(x))]
        })
        .collect();
    out.write_csv("zx_model.csv", &["A_bar", "wZX"], &curve)?;

    eprintln!("[5/8] pi/2 amplitude");
    let a_bar_half = solve_pi_half_amplitude(&fit, t_cr, ctx.n_cr()).context("stage pi/2 amplitude")?;
    let amp_half = a_bar_half / unit;
    if !(amp_half > 0.0 && amp_half <= 1.0) {
        bail!("stage pi/2 amplitude: drive amplitude {amp_half} is outside (0, 1]");
    }

    eprintln!("[6/8] local optimization of the CR at A = {amp_half}");
    let cr = ctx.cr(amp_half, phi)?;
    let cr_choi = ctx
        .qpt(&cr, stage_seed(a.seed, stage::QPT_CR, 0))
        .context("stage CR tomography")?;
    out.write("cr_pi_half_choi.json", choi_document(&cr_choi, &[("a_bar", json!(a_bar_half))])?.as_bytes())?;
    let report = optimize_local(&cr_choi.to_superop(), Target::Cx, a.restarts, stage_seed(a.seed, stage::OPTIMIZE, 0))
        .context("stage local optimization")?;
    out.write_json("local_optimization.json", &report)?;
    let (cnot, _) = build_optimized_cnot(&map, &cr, &report.rotations, (1, 0)).context("stage CNOT assembly")?;
    out.write("cnot_schedule.json", schedule_to_json(&cnot).as_bytes())?;

    eprintln!("[7/8] CNOT tomography");
    let cx = Target::Cx.unitary();
    let cnot_choi = ctx
        .qpt(&cnot, stage_seed(a.seed, stage::QPT_CNOT, 0))
        .context("stage CNOT tomography")?;
    out.write("cnot_choi.json", choi_document(&cnot_choi, &[])?.as_bytes())?;
    let f_qpt = average_gate_fidelity(&cnot_choi.to_superop(), &cx)?;
    let exact = frame_corrected_superoperator(&cnot, &backend).context("stage CNOT evaluation")?;
    let f_exact = average_gate_fidelity(&exact, &cx)?;

    eprintln!("[8/8] readout characterization");
    let readout = readout_stage(&ctx, &mut out, a.seed)?;

    let summary = DemoSummary {
        seed: a.seed,
        shots: a.shots,
        echo: a.echo,
        n_cr: ctx.n_cr(),
        phi_opt: phi,
        a_opt: cal.a_opt,
        fit_j: fit.j,
        fit_lambda: fit.lambda,
        pi_half_a_bar: a_bar_half,
        pi_half_amplitude: amp_half,
        f_max: report.f_max,
        f_zero: report.f_zero,
        cnot_fidelity_qpt: f_qpt,
        cnot_fidelity_exact: f_exact,
        assignment_fidelity: readout.qubits.iter().map(|q| q.assignment.fidelity).collect(),
    };
    out.write_json("summary.json", &summary)?;
    out.finish("manifest.json")?;
    Ok(summary)
}

/// Calibration schedules at fixed shots; the first half of each record
/// trains the discriminators, the second half scores them.
fn readout_stage(ctx: &Ctx<'_>, out: &mut OutputSet, seed: u64) -> Result<ReadoutReport> {
    let set = qpt_schedules(&Schedule::new("idle"), ctx.map, SchedulingPolicy::Alap)?;
    let mut train = Vec::new();
    let mut test = Vec::new();
    let mut all = Vec::new();
    for (k, (name, sched)) in set.calibrations.iter().enumerate() {
        let r = simulate(sched, ctx.backend, READOUT_SHOTS, stage_seed(seed, stage::READOUT, k as u64))
            .with_context(|| format!("stage readout simulation of {name}"))?;
        for rec in iq_records(name, &r) {
            let half = rec.shots.len() / 2;
            train.push(IqRecord {
                shots: rec.shots[..half].to_vec(),
                ..rec.clone()
            });
            test.push(IqRecord {
                shots: rec.shots[half..].to_vec(),
                ..rec.clone()
            });
            all.push(rec);
        }
    }
    let report = readout_report(&train, &test, &[]).context("stage readout characterization")?;
    let mut rows = Vec::new();
    for rec in &all {
        let disc = &report.qubits.iter().find(|q| q.qubit == rec.qubit).expect("calibrated qubit").discriminator;
        let prepared = rec.schedule.as_bytes()[rec.schedule.len() - 1 - rec.qubit as usize] - b'0';
        let half = rec.shots.len() / 2;
        for (n, [i, q]) in rec.shots.iter().enumerate() {
            let z = num_complex::Complex64::new(*i, *q);
            rows.push(vec![
                rec.schedule.clone(),
                rec.qubit.to_string(),
                n.to_string(),
                if n < half { "train" } else { "test" }.to_string(),
                num(*i),
                num(*q),
                prepared.to_string(),
                disc.classify(z).to_string(),
            ]);
        }
    }
    out.write_csv(
        "iq.csv",
        &["schedule", "qubit", "shot", "split", "i", "q", "prepared", "assigned"],
        &rows,
    )?;
    out.write_json("readout.json", &report)?;
    Ok(report)
}

/// Run the demo and print the headline numbers.
pub fn demo_cmd(a: &DemoArgs) -> Result<()> {
    let s = run_demo(a)?;
    println!("phi_opt = {:.3} rad", s.phi_opt);
    println!("J = {:.4e} Hz, lambda = {:.4e} Hz", s.fit_j, s.fit_lambda);
    println!("pi/2 mean amplitude = {:.4} (drive amplitude {:.4})", s.pi_half_a_bar, s.pi_half_amplitude);
    println!("F_max = {:.5}", s.f_max);
    println!("CNOT fidelity: tomography {:.5}, channel {:.5}", s.cnot_fidelity_qpt, s.cnot_fidelity_exact);
    for (q, f) in s.assignment_fidelity.iter().enumerate() {
        println!("assignment fidelity q{q} = {f:.4}");
    }
    println!("outputs in {}", Path::new(&a.out_dir).display());
    Ok(())
}
