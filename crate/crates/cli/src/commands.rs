// Copyright 2026 PulseForge Contributors
// SPDX-License-Identifier: Apache-2.0

//! Single-stage subcommands.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use pulseforge_core::codegen::lower;
use pulseforge_core::fidelity_opt::{optimize_local, Target};
use pulseforge_core::hamiltonian_est::{fit_third_order, solve_pi_half_amplitude, HamiltonianCoefficients};
use pulseforge_core::pulse_ir::json::{schedule_from_json, schedule_to_json};
use pulseforge_core::pulse_ir::validate;
use pulseforge_core::scheduler::{circuit_from_json, schedule_circuit, InstructionScheduleMap, SchedulingPolicy};
use pulseforge_core::simulator::{simulate, BackendModel, BackendSpec, SimResult};
use pulseforge_core::tomography::{fit_choi, qpt_schedules, run_qpt, ChoiMatrix};
use pulseforge_core::Schedule;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::iq::{parse_records, readout_report, IqRecord};
use crate::output::{num, single, RunManifest};
use crate::Diagnostics;

/// Labels of the coefficient table columns after `A_bar`.
pub const COEFFICIENT_COLUMNS: [&str; 7] = ["ZI", "ZX", "ZY", "ZZ", "IX", "IY", "IZ"];

pub fn coefficient_header() -> Vec<String> {
    std::iter::once("A_bar".to_string())
        .chain(COEFFICIENT_COLUMNS.iter().map(|c| format!("w{c}")))
        .collect()
}

pub fn coefficient_row(h: &HamiltonianCoefficients) -> Vec<String> {
    std::iter::once(num(h.a_bar))
        .chain(COEFFICIENT_COLUMNS.iter().map(|c| num(h.get(c).expect("known label"))))
        .collect()
}

pub fn load_schedule(m: &mut RunManifest, path: &Path) -> Result<Schedule> {
    let text = m.input_text(path)?;
    let s = schedule_from_json(&text).with_context(|| format!("parsing schedule {}", path.display()))?;
    check_schedule(&s).with_context(|| format!("validating {}", path.display()))?;
    Ok(s)
}

fn check_schedule(s: &Schedule) -> Result<()> {
    let diags = validate(s);
    if diags.is_empty() {
        Ok(())
    } else {
        Err(Diagnostics(diags.iter().map(|d| d.to_string()).collect()).into())
    }
}

pub fn load_backend(m: &mut RunManifest, path: &Path) -> Result<BackendModel> {
    let text = m.input_text(path)?;
    let spec = BackendSpec::from_json(&text).with_context(|| format!("parsing backend {}", path.display()))?;
    BackendModel::from_spec(&spec).with_context(|| format!("compiling backend {}", path.display()))
}

pub fn load_instmap(m: &mut RunManifest, path: &Path) -> Result<InstructionScheduleMap> {
    let text = m.input_text(path)?;
    InstructionScheduleMap::from_json(&text).with_context(|| format!("parsing instruction map {}", path.display()))
}

/// `--instmap` if given, else the backend's calibrated defaults.
fn instmap_or_default(
    m: &mut RunManifest,
    instmap: Option<&Path>,
    backend: Option<&BackendModel>,
) -> Result<InstructionScheduleMap> {
    match (instmap, backend) {
        (Some(p), _) => load_instmap(m, p),
        (None, Some(b)) => Ok(b.default_instmap()?),
        (None, None) => bail!("need --instmap or --backend"),
    }
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub sched: Option<PathBuf>,
    #[arg(long)]
    pub backend: Option<PathBuf>,
    #[arg(long)]
    pub instmap: Option<PathBuf>,
    #[arg(long)]
    pub circuit: Option<PathBuf>,
}

pub fn validate_cmd(a: &ValidateArgs) -> Result<()> {
    let mut m = RunManifest::new("validate", None);
    let mut errors = Vec::new();
    let mut any = false;
    if let Some(p) = &a.sched {
        any = true;
        match schedule_from_json(&m.input_text(p)?) {
            Ok(s) => errors.extend(validate(&s).iter().map(|d| format!("{}: {d}", p.display()))),
            Err(e) => errors.push(format!("{}: {e}", p.display())),
        }
    }
    let mut backend = None;
    if let Some(p) = &a.backend {
        any = true;
        match BackendSpec::from_json(&m.input_text(p)?).and_then(|s| BackendModel::from_spec(&s)) {
            Ok(b) => backend = Some(b),
            Err(e) => errors.push(format!("{}: {e}", p.display())),
        }
    }
    if let Some(p) = &a.instmap {
        any = true;
        if let Err(e) = InstructionScheduleMap::from_json(&m.input_text(p)?) {
            errors.push(format!("{}: {e}", p.display()));
        }
    }
    if let Some(p) = &a.circuit {
        any = true;
        match circuit_from_json(&m.input_text(p)?) {
            Ok(c) => {
                if let Err(e) = c.check() {
                    errors.push(format!("{}: {e}", p.display()));
                }
                // With a gate map at hand, also check that the circuit schedules.
                let map = match (&a.instmap, &backend) {
                    (Some(ip), _) => InstructionScheduleMap::from_json(&m.input_text(ip)?).ok(),
                    (None, Some(b)) => b.default_instmap().ok(),
                    _ => None,
                };
                if let Some(map) = map {
                    if let Err(e) = schedule_circuit(&c, &map, SchedulingPolicy::Alap) {
                        errors.push(format!("{}: {e}", p.display()));
                    }
                }
            }
            Err(e) => errors.push(format!("{}: {e}", p.display())),
        }
    }
    if !any {
        bail!("nothing to validate; pass --sched, --backend, --instmap or --circuit");
    }
    if errors.is_empty() {
        for (path, hash) in &m.inputs {
            println!("ok {path} sha256:{hash}");
        }
        Ok(())
    } else {
        Err(Diagnostics(errors).into())
    }
}

#[derive(Debug, Args)]
pub struct ScheduleArgs {
    #[arg(long)]
    pub circuit: PathBuf,
    #[arg(long)]
    pub instmap: Option<PathBuf>,
    /// Backend JSON whose calibrations supply the gate map when --instmap is absent.
    #[arg(long)]
    pub backend: Option<PathBuf>,
    #[arg(long, default_value = "alap")]
    pub policy: SchedulingPolicy,
    #[arg(short, long)]
    pub output: PathBuf,
}

pub fn schedule_cmd(a: &ScheduleArgs) -> Result<()> {
    let mut m = RunManifest::new("schedule", None);
    m.arg("policy", a.policy);
    let circuit = circuit_from_json(&m.input_text(&a.circuit)?)
        .with_context(|| format!("parsing circuit {}", a.circuit.display()))?;
    let backend = a.backend.as_deref().map(|p| load_backend(&mut m, p)).transpose()?;
    let map = instmap_or_default(&mut m, a.instmap.as_deref(), backend.as_ref())?;
    let sched = schedule_circuit(&circuit, &map, a.policy).context("scheduling")?;
    let (mut out, name) = single(&a.output, m);
    out.write(&name, schedule_to_json(&sched).as_bytes())?;
    out.finish(&format!("{name}.manifest.json"))?;
    eprintln!("scheduled {} entries, duration {} cycles", sched.entries().len(), sched.duration());
    Ok(())
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[arg(long)]
    pub sched: PathBuf,
    #[arg(long)]
    pub backend: PathBuf,
    #[arg(short, long)]
    pub output: PathBuf,
}

pub fn render_cmd(a: &RenderArgs) -> Result<()> {
    let mut m = RunManifest::new("render", None);
    let sched = load_schedule(&mut m, &a.sched)?;
    let backend = load_backend(&mut m, &a.backend)?;
    let progs = lower(&sched, backend.dt, &backend.codegen_frequencies(&sched)).context("lowering")?;
    let mut rows = Vec::new();
    for (ch, prog) in &progs {
        if !ch.is_pulse() {
            continue;
        }
        for (n, (d, z)) in prog.envelope.iter().zip(&prog.signal).enumerate() {
            rows.push(vec![ch.to_string(), n.to_string(), num(d.re), num(d.im), num(z.re)]);
        }
    }
    let (mut out, name) = single(&a.output, m);
    out.write_csv(&name, &["channel", "cycle", "re", "im", "D"], &rows)?;
    out.finish(&format!("{name}.manifest.json"))
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub sched: PathBuf,
    #[arg(long)]
    pub backend: PathBuf,
    #[arg(long, default_value_t = 1024)]
    pub shots: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// 1: kerneled IQ points, 2: discriminated bits.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub level: u8,
    #[arg(short, long)]
    pub output: PathBuf,
}

pub fn iq_records(schedule: &str, r: &SimResult) -> Vec<IqRecord> {
    let mut out = Vec::new();
    for a in &r.acquisitions {
        for (k, q) in a.qubits.iter().enumerate() {
            out.push(IqRecord {
                schedule: schedule.to_string(),
                qubit: *q,
                shots: a.iq[k].iter().map(|z| [z.re, z.im]).collect(),
            });
        }
    }
    out
}

pub fn simulate_cmd(a: &SimulateArgs) -> Result<()> {
    let mut m = RunManifest::new("simulate", Some(a.seed));
    m.arg("shots", a.shots).arg("level", a.level);
    let sched = load_schedule(&mut m, &a.sched)?;
    let backend = load_backend(&mut m, &a.backend)?;
    let r = simulate(&sched, &backend, a.shots, a.seed).context("simulating")?;
    let acquisitions: Vec<Value> = r
        .acquisitions
        .iter()
        .map(|q| json!({"time": q.time, "qubits": q.qubits, "slots": q.slots, "probabilities": q.probabilities}))
        .collect();
    let mut doc = Map::new();
    doc.insert("schedule".into(), json!(sched.name()));
    doc.insert("shots".into(), json!(a.shots));
    doc.insert("seed".into(), json!(a.seed));
    doc.insert("level".into(), json!(a.level));
    doc.insert("acquisitions".into(), Value::Array(acquisitions));
    if a.level == 1 {
        doc.insert("iq".into(), serde_json::to_value(iq_records(sched.name(), &r))?);
    } else {
        doc.insert("counts".into(), json!(r.counts()));
        doc.insert("memory".into(), json!(r.memory()));
    }
    let (mut out, name) = single(&a.output, m);
    out.write_json(&name, &doc)?;
    out.finish(&format!("{name}.manifest.json"))
}

/// Choi JSON plus optional metadata fields.
pub fn choi_document(choi: &ChoiMatrix, meta: &[(&str, Value)]) -> Result<String> {
    let mut v: Map<String, Value> = serde_json::from_str(&choi.to_json())?;
    for (k, x) in meta {
        v.insert(k.to_string(), x.clone());
    }
    let mut s = serde_json::to_string(&v)?;
    s.push('\n');
    Ok(s)
}

#[derive(Debug, Deserialize)]
struct ChoiMeta {
    a_bar: Option<f64>,
    n_cr: Option<u32>,
}

#[derive(Debug, Args)]
pub struct QptArgs {
    /// Schedule of the two-qubit gate on qubits 0 and 1.
    #[arg(long)]
    pub gate: PathBuf,
    #[arg(long)]
    pub instmap: Option<PathBuf>,
    #[arg(long)]
    pub backend: PathBuf,
    #[arg(long, default_value_t = 2048)]
    pub shots: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "alap")]
    pub policy: SchedulingPolicy,
    /// Mean CR amplitude recorded in the output for `fit-hamiltonian`.
    #[arg(long)]
    pub a_bar: Option<f64>,
    /// Number of CR pulses in the gate, recorded alongside `--a-bar`.
    #[arg(long)]
    pub ncr: Option<u32>,
    #[arg(short, long)]
    pub output: PathBuf,
}

pub fn qpt_cmd(a: &QptArgs) -> Result<()> {
    let mut m = RunManifest::new("qpt", Some(a.seed));
    m.arg("shots", a.shots).arg("policy", a.policy);
    let gate = load_schedule(&mut m, &a.gate)?;
    let backend = load_backend(&mut m, &a.backend)?;
    let map = instmap_or_default(&mut m, a.instmap.as_deref(), Some(&backend))?;
    let set = qpt_schedules(&gate, &map, a.policy).context("building tomography schedules")?;
    let run = run_qpt(&set, &backend, a.shots, a.seed).context("simulating tomography")?;
    let choi = fit_choi(&run.data).context("fitting Choi matrix")?;
    let mut meta = Vec::new();
    if let Some(x) = a.a_bar {
        m.arg("a_bar", x);
        meta.push(("a_bar", json!(x)));
    }
    if let Some(n) = a.ncr {
        m.arg("ncr", n);
        meta.push(("n_cr", json!(n)));
    }
    let (mut out, name) = single(&a.output, m);
    out.write(&name, choi_document(&choi, &meta)?.as_bytes())?;
    out.finish(&format!("{name}.manifest.json"))
}

#[derive(Debug, Args)]
pub struct FitHamiltonianArgs {
    /// Directory of Choi JSON files, each carrying an `a_bar` field.
    #[arg(long)]
    pub choi_dir: PathBuf,
    /// CR pulse duration in cycles.
    #[arg(long)]
    pub tcr: u64,
    #[arg(long)]
    pub dt: f64,
    /// Control-target detuning, Hz.
    #[arg(long, allow_hyphen_values = true)]
    pub delta: f64,
    /// Control anharmonicity, Hz.
    #[arg(long, allow_hyphen_values = true)]
    pub anharm: f64,
    /// CR pulses per gate for files without an `n_cr` field.
    #[arg(long, default_value_t = 1)]
    pub ncr: u32,
    /// Coefficient table; defaults to the output path with a `.csv` extension.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Serialize)]
pub struct HamiltonianFitReport {
    pub fit: pulseforge_core::hamiltonian_est::ThirdOrderFit,
    pub points: Vec<HamiltonianCoefficients>,
    /// Smallest positive `Ā` giving a π/2 ZX rotation, if any.
    pub pi_half_a_bar: Option<f64>,
}

/// Coefficients per Choi file in `dir`, sorted by file name.
pub fn coefficients_from_dir(
    m: &mut RunManifest,
    dir: &Path,
    t_cr: f64,
    default_ncr: u32,
) -> Result<Vec<HamiltonianCoefficients>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("listing {}", dir.display()))?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<_>>()
        .with_context(|| format!("listing {}", dir.display()))?;
    files.retain(|p| {
        let name = p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        name.ends_with(".json") && !name.ends_with(".manifest.json")
    });
    files.sort();
    if files.is_empty() {
        bail!("no Choi files in {}", dir.display());
    }
    let mut points = Vec::new();
    for p in files {
        let text = m.input_text(&p)?;
        let choi = ChoiMatrix::from_json(&text).with_context(|| format!("parsing {}", p.display()))?;
        let meta: ChoiMeta = serde_json::from_str(&text)?;
        let a_bar = meta.a_bar.with_context(|| format!("{} has no a_bar field", p.display()))?;
        let h = HamiltonianCoefficients::from_superop(&choi.to_superop(), a_bar, t_cr, meta.n_cr.unwrap_or(default_ncr))
            .with_context(|| format!("extracting coefficients from {}", p.display()))?;
        points.push(h);
    }
    points.sort_by(|a, b| a.a_bar.total_cmp(&b.a_bar));
    Ok(points)
}

pub fn fit_hamiltonian_cmd(a: &FitHamiltonianArgs) -> Result<()> {
    let mut m = RunManifest::new("fit-hamiltonian", None);
    m.arg("tcr", a.tcr)
        .arg("dt", num(a.dt))
        .arg("delta", num(a.delta))
        .arg("anharm", num(a.anharm))
        .arg("ncr", a.ncr);
    let t_cr = a.tcr as f64 * a.dt;
    let points = coefficients_from_dir(&mut m, &a.choi_dir, t_cr, a.ncr)?;
    let pairs: Vec<(f64, f64)> = points.iter().map(|h| (h.a_bar, h.zx())).collect();
    let fit = fit_third_order(&pairs, a.delta, a.anharm).context("third-order fit")?;
    let n_cr = points[0].n_cr;
    let pi_half_a_bar = match solve_pi_half_amplitude(&fit, t_cr, n_cr) {
        Ok(x) => Some(x),
        Err(e) => {
            eprintln!("warning: {e}");
            None
        }
    };
    let rows: Vec<Vec<String>> = points.iter().map(coefficient_row).collect();
    let csv_path = a.csv.clone().unwrap_or_else(|| a.output.with_extension("csv"));
    let report = HamiltonianFitReport {
        fit,
        points,
        pi_half_a_bar,
    };
    let (mut out, name) = single(&a.output, m);
    out.write_json(&name, &report)?;
    let header = coefficient_header();
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let csv_name = relative_to(&csv_path, out.root())?;
    out.write_csv(&csv_name, &header, &rows)?;
    out.finish(&format!("{name}.manifest.json"))?;
    println!("J = {} Hz, lambda = {} Hz", report.fit.j, report.fit.lambda);
    if let Some(x) = pi_half_a_bar {
        println!("pi/2 mean amplitude = {x}");
    }
    Ok(())
}

fn relative_to(path: &Path, root: &Path) -> Result<String> {
    let p = path.strip_prefix(root).unwrap_or(path);
    Ok(p.to_str().with_context(|| format!("{} is not UTF-8", path.display()))?.to_string())
}

#[derive(Debug, Args)]
pub struct CalibrateCnotArgs {
    #[arg(long)]
    pub choi: PathBuf,
    #[arg(long, default_value = "cx")]
    pub target: Target,
    #[arg(long, default_value_t = 8)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short, long)]
    pub output: PathBuf,
}

pub fn calibrate_cnot_cmd(a: &CalibrateCnotArgs) -> Result<()> {
    let mut m = RunManifest::new("calibrate-cnot", Some(a.seed));
    m.arg("target", a.target).arg("restarts", a.restarts);
    let text = m.input_text(&a.choi)?;
    let choi = ChoiMatrix::from_json(&text).with_context(|| format!("parsing {}", a.choi.display()))?;
    let report = optimize_local(&choi.to_superop(), a.target, a.restarts, a.seed).context("local optimization")?;
    let (mut out, name) = single(&a.output, m);
    out.write_json(&name, &report)?;
    out.finish(&format!("{name}.manifest.json"))?;
    println!("theta = {:?}", report.rotations.theta);
    println!("F_max = {} (F at theta = 0: {})", report.f_max, report.f_zero);
    Ok(())
}

#[derive(Debug, Args)]
pub struct DiscriminateArgs {
    /// Calibration IQ records from schedules named cal_<bits>.
    #[arg(long)]
    pub cal: PathBuf,
    /// IQ records to classify.
    #[arg(long)]
    pub data: Option<PathBuf>,
    #[arg(short, long)]
    pub output: PathBuf,
}

pub fn discriminate_cmd(a: &DiscriminateArgs) -> Result<()> {
    let mut m = RunManifest::new("discriminate", None);
    let cal = parse_records(&m.input_text(&a.cal)?).with_context(|| format!("parsing {}", a.cal.display()))?;
    let data = match &a.data {
        Some(p) => parse_records(&m.input_text(p)?).with_context(|| format!("parsing {}", p.display()))?,
        None => Vec::new(),
    };
    let report = readout_report(&cal, &cal, &data)?;
    let (mut out, name) = single(&a.output, m);
    out.write_json(&name, &report)?;
    out.finish(&format!("{name}.manifest.json"))?;
    for q in &report.qubits {
        println!(
            "qubit {}: F_a = {:.4} [{:.4}, {:.4}]",
            q.qubit, q.assignment.fidelity, q.assignment.lo, q.assignment.hi
        );
    }
    Ok(())
}
