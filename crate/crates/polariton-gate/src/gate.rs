//! Full gate pipeline: trajectories for the three distinct spin
//! configurations → all six phase pairs → density matrix, fidelity,
//! gate-condition residuals and leakage metrics.
//!
//! ↑↓ and ↓↑ share one detuning, so their trajectory is integrated once and
//! shared; the degenerate pairs are copies by construction.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::device::{DetuningMap, SpinConfig};
use crate::error::Result;
use crate::phase::{
    density_matrix, fidelity, gate_conditions, leakage_metrics, min_eigenvalue, phase_difference,
    trace, GateConditions, LeakageMetrics, PhasePair,
};
use crate::pulse::{Pulse, TimeGrid};
use crate::trajectory::{residual_amplitude, solve_alpha_ode, ResidualAmplitude, Trajectory};

/// Everything a single gate evaluation produces.
#[derive(Debug, Clone)]
pub struct GateOutput {
    /// Distinct trajectories in basis order: ↑↑, ↓↓, shared ↑↓/↓↑.
    pub trajectories: [Trajectory; 3],
    /// All six ordered pairs (i < j in basis order).
    pub pairs: Vec<PhasePair>,
    pub report: GateReport,
}

/// Serializable per-pair phase row.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PhaseRow {
    pub i: &'static str,
    pub j: &'static str,
    pub theta: f64,
    pub big_gamma: f64,
}

/// Gate summary: fidelity, phases, condition residuals, leakage, residuals.
#[derive(Debug, Clone, Serialize)]
pub struct GateReport {
    pub fidelity: f64,
    pub phases: Vec<PhaseRow>,
    pub conditions: GateConditions,
    pub leakage: LeakageMetrics,
    pub residual_amplitudes: BTreeMap<&'static str, ResidualAmplitude>,
    pub density_matrix_trace: f64,
    pub density_matrix_min_eigenvalue: f64,
}

/// Run the full pipeline at one (pulse, detunings, γ) point.
pub fn run_gate(
    detunings: &DetuningMap,
    gamma_energy: f64,
    pulse: &Pulse,
    n_explicit: Option<usize>,
) -> Result<GateOutput> {
    let grid = TimeGrid::for_pulse(pulse, detunings.max_abs(), gamma_energy, n_explicit)?;
    run_gate_on_grid(detunings, gamma_energy, pulse, &grid)
}

/// Same pipeline on a caller-supplied grid (it must still satisfy the step
/// rule; the solvers check).
pub fn run_gate_on_grid(
    detunings: &DetuningMap,
    gamma_energy: f64,
    pulse: &Pulse,
    grid: &TimeGrid,
) -> Result<GateOutput> {
    let t_uu = solve_alpha_ode(
        detunings.get(SpinConfig::UpUp),
        gamma_energy,
        pulse,
        grid,
        SpinConfig::UpUp,
    )?;
    let t_dd = solve_alpha_ode(
        detunings.get(SpinConfig::DownDown),
        gamma_energy,
        pulse,
        grid,
        SpinConfig::DownDown,
    )?;
    let t_x = solve_alpha_ode(
        detunings.get(SpinConfig::UpDown),
        gamma_energy,
        pulse,
        grid,
        SpinConfig::UpDown,
    )?;

    // logical view in basis order; 2 and 3 share the cross trajectory
    let by_index = |idx: usize| -> &Trajectory {
        match idx {
            0 => &t_uu,
            1 => &t_dd,
            _ => &t_x,
        }
    };

    let mut pairs = Vec::with_capacity(6);
    for a in 0..4usize {
        for b in a + 1..4 {
            let mut p = phase_difference(by_index(a), by_index(b), pulse)?;
            p.i = SpinConfig::ALL[a];
            p.j = SpinConfig::ALL[b];
            pairs.push(p);
        }
    }

    let f = fidelity(&pairs)?;
    let rho = density_matrix(&pairs)?;
    let conditions = gate_conditions(&pairs)?;
    let leakage = leakage_metrics(&[&t_uu, &t_dd, &t_x])?;
    let mut residuals = BTreeMap::new();
    residuals.insert(SpinConfig::UpUp.label(), residual_amplitude(&t_uu));
    residuals.insert(SpinConfig::DownDown.label(), residual_amplitude(&t_dd));
    residuals.insert(SpinConfig::UpDown.label(), residual_amplitude(&t_x));
    residuals.insert(SpinConfig::DownUp.label(), residual_amplitude(&t_x));

    let report = GateReport {
        fidelity: f,
        phases: pairs
            .iter()
            .map(|p| PhaseRow {
                i: p.i.label(),
                j: p.j.label(),
                theta: p.theta(),
                big_gamma: p.big_gamma(),
            })
            .collect(),
        conditions,
        leakage,
        residual_amplitudes: residuals,
        density_matrix_trace: trace(&rho).re,
        density_matrix_min_eigenvalue: min_eigenvalue(&rho),
    };

    Ok(GateOutput {
        trajectories: [t_uu, t_dd, t_x],
        pairs,
        report,
    })
}
