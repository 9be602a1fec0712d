//! polgate: CLI front end.
//!
//! Subcommands: device, trace, fidelity, sweep, optimize, verify.
//! Exit codes: 0 success, 1 validation failure, 2 numerical-tolerance
//! failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use polariton_gate::config::{ResolvedRun, RunConfig};
use polariton_gate::device::pump_power;
use polariton_gate::error::{Error, Result};
use polariton_gate::gate::run_gate;
use polariton_gate::report;
use polariton_gate::sweep::{argmax, refine, reproduction_report, sweep, SweepGrid, SweepReport};
use polariton_gate::verify::run_verify;

#[derive(Parser)]
#[command(
    name = "polgate",
    about = "Spin-conditioned cavity-polariton gate simulator",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Path to the JSON run configuration.
    #[arg(long, global = true, default_value = "config.json")]
    config: PathBuf,

    /// Output directory (overrides config.output_dir).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for grid sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Derive lifetimes, spot size, coupling and detunings from the device
    /// section and write device.json / device.txt.
    Device,
    /// Integrate the three distinct trajectories and write per-spin CSVs
    /// plus a leakage/residual summary.
    Trace,
    /// Run the full pipeline at the configured (τ, Ω) and write
    /// gate_report.json and phases.csv.
    Fidelity,
    /// Evaluate fidelity over the configured (τ, Ω) grid; write sweep.csv,
    /// sweep.json and sweep_report.json.
    Sweep,
    /// Sweep (when configured), then compass-refine from the best point;
    /// write optimum.json with the pump power at the optimum.
    Optimize,
    /// Run the Γ-identity, quadrature/ODE and Fock-oracle cross-checks;
    /// exit 0 only if every tolerance holds.
    Verify,
}

fn out_dir(cli: &Cli, config: &RunConfig) -> PathBuf {
    cli.out
        .clone()
        .or_else(|| config.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn sweep_report(run: &ResolvedRun, grid: &SweepGrid) -> Result<SweepReport> {
    let point = run
        .sweep
        .as_ref()
        .and_then(|s| s.report_point.as_ref())
        .map(|p| (p.tau_ps, p.omega_mev));
    reproduction_report(grid, point)
}

fn dispatch(cli: &Cli) -> Result<()> {
    let config = RunConfig::from_path(&cli.config)?;
    let run = config.resolve()?;
    let dir = out_dir(cli, &config);

    match cli.command {
        Command::Device => {
            let paths = report::write_device(&dir, &config.device, &run.derived)?;
            println!("tau_photon_ps = {}", run.derived.tau_photon_ps);
            println!("tau_polariton_ps = {}", run.derived.tau_polariton_ps);
            println!("spot_radius_um = {}", run.derived.spot_radius_um);
            println!("v_ueV = {}", run.derived.v_uev);
            for p in paths {
                println!("wrote {}", p.display());
            }
        }
        Command::Trace => {
            let out = run_gate(&run.detunings, run.gamma_energy, &run.pulse, run.n_samples)?;
            let paths = report::write_trace(&dir, &out, &run.pulse)?;
            println!("max_separation = {}", out.report.leakage.max_separation);
            println!("t_at_max_ps = {}", out.report.leakage.t_at_max);
            println!("within_noise = {}", out.report.leakage.within_noise);
            for p in paths {
                println!("wrote {}", p.display());
            }
        }
        Command::Fidelity => {
            let out = run_gate(&run.detunings, run.gamma_energy, &run.pulse, run.n_samples)?;
            let gate_path = report::write_gate_report(&dir, &out)?;
            let phases_path = report::write_phases_csv(&dir, &out)?;
            println!("fidelity = {}", out.report.fidelity);
            println!("wrote {}", gate_path.display());
            println!("wrote {}", phases_path.display());
        }
        Command::Sweep => {
            let spec = run.sweep_spec()?;
            let grid = sweep(&spec)?;
            let csv = report::write_sweep_csv(&dir, &grid)?;
            let json = report::write_sweep_json(&dir, &grid)?;
            let rep = sweep_report(&run, &grid)?;
            let rep_path = report::write_sweep_report(&dir, &rep)?;
            println!(
                "best: tau = {} ps, omega = {} meV, F = {}",
                rep.best_tau_ps, rep.best_omega_mev, rep.best_fidelity
            );
            for p in [csv, json, rep_path] {
                println!("wrote {}", p.display());
            }
        }
        Command::Optimize => {
            let start = if run.sweep.is_some() {
                let spec = run.sweep_spec()?;
                let grid = sweep(&spec)?;
                report::write_sweep_csv(&dir, &grid)?;
                report::write_sweep_json(&dir, &grid)?;
                let rep = sweep_report(&run, &grid)?;
                report::write_sweep_report(&dir, &rep)?;
                let (t, o, _) = argmax(&grid)?;
                (t, o)
            } else {
                (run.pulse.tau, run.pulse.omega_peak)
            };
            let optimum = refine(&run.detunings, run.gamma_energy, start)?;
            let power = pump_power(
                optimum.omega_mev,
                config.device.lambda,
                run.derived.tau_photon_ps,
            )?;
            let path = report::write_optimum(&dir, &optimum, power)?;
            println!(
                "optimum: tau = {} ps, omega = {} meV, F = {}, converged = {}",
                optimum.tau_ps, optimum.omega_mev, optimum.fidelity, optimum.converged
            );
            println!("pump_power_mW = {power}");
            println!("wrote {}", path.display());
        }
        Command::Verify => {
            let rep = run_verify(&run)?;
            let path = report::write_verify(&dir, &rep)?;
            for row in &rep.gamma_identity {
                println!(
                    "gamma_identity {}-{}: |diff| = {:.3e}",
                    row.pair.0, row.pair.1, row.abs_diff
                );
            }
            for row in &rep.method_agreement {
                println!(
                    "method_agreement {}: max |diff| = {:.3e}",
                    row.spin, row.max_abs_diff
                );
            }
            for row in &rep.oracle {
                println!(
                    "oracle {}-{}: |dtheta| = {:.3e}, |dGamma| = {:.3e}",
                    row.pair.0, row.pair.1, row.abs_dtheta, row.abs_dgamma
                );
            }
            println!("wrote {}", path.display());
            if let Some(breach) = rep.breach() {
                return Err(breach);
            }
            println!("verify: all tolerances met");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: failed to build thread pool: {e}");
            return ExitCode::from(1);
        }
    }
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let mut source = std::error::Error::source(&e);
            while let Some(s) = source {
                eprintln!("  caused by: {s}");
                source = s.source();
            }
            if matches!(e, Error::Tolerance(_)) || e.is_tolerance() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
