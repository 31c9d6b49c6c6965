// Copyright 2026 PulseForge Contributors
// SPDX-License-Identifier: Apache-2.0

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pulseforge_cli::commands::{
    calibrate_cnot_cmd, discriminate_cmd, fit_hamiltonian_cmd, qpt_cmd, render_cmd, schedule_cmd, simulate_cmd,
    validate_cmd, CalibrateCnotArgs, DiscriminateArgs, FitHamiltonianArgs, QptArgs, RenderArgs, ScheduleArgs,
    SimulateArgs, ValidateArgs,
};
use pulseforge_cli::demo::{demo_cmd, DemoArgs};
use pulseforge_cli::exit_code;

/// Pulse-level schedules, simulation and cross-resonance calibration.
///
/// Exit codes: 0 ok, 2 validation, 3 numeric failure, 4 I/O.
/// PULSEFORGE_THREADS caps the worker threads.
#[derive(Debug, Parser)]
#[command(name = "pulseforge", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check schedules, backends, gate maps and circuits.
    Validate(ValidateArgs),
    /// Schedule a circuit onto pulses.
    Schedule(ScheduleArgs),
    /// Lower a schedule to per-channel sample tables.
    Render(RenderArgs),
    /// Simulate a schedule and sample measurement shots.
    Simulate(SimulateArgs),
    /// Two-qubit process tomography of a gate schedule.
    Qpt(QptArgs),
    /// Extract Hamiltonian coefficients and fit the third-order model.
    FitHamiltonian(FitHamiltonianArgs),
    /// Optimize local rotations turning a measured gate into a CNOT.
    CalibrateCnot(CalibrateCnotArgs),
    /// Train readout discriminators and classify IQ data.
    Discriminate(DiscriminateArgs),
    /// Full cross-resonance calibration on the simulated device.
    DemoCr(DemoArgs),
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("PULSEFORGE_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| anyhow::anyhow!("PULSEFORGE_THREADS must be a positive integer, got '{v}'"))?;
        if n == 0 {
            anyhow::bail!("PULSEFORGE_THREADS must be a positive integer, got 0");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    configure_threads()?;
    match &cli.command {
        Command::Validate(a) => validate_cmd(a),
        Command::Schedule(a) => schedule_cmd(a),
        Command::Render(a) => render_cmd(a),
        Command::Simulate(a) => simulate_cmd(a),
        Command::Qpt(a) => qpt_cmd(a),
        Command::FitHamiltonian(a) => fit_hamiltonian_cmd(a),
        Command::CalibrateCnot(a) => calibrate_cnot_cmd(a),
        Command::Discriminate(a) => discriminate_cmd(a),
        Command::DemoCr(a) => demo_cmd(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
