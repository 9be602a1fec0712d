//! Cross-validation pipeline behind the `verify` command: the Γ identity,
//! ODE-vs-quadrature trajectory agreement, and the truncated-Fock oracle
//! comparison, each against its pinned tolerance.

use serde::Serialize;

use crate::config::ResolvedRun;
use crate::device::SpinConfig;
use crate::error::{Error, Result};
use crate::fock::{evolve_block, extract_phase};
use crate::numerics::wrap_angle;
use crate::phase::{gamma_identity_value, phase_difference};
use crate::pulse::{Pulse, TimeGrid};
use crate::trajectory::{max_elementwise_difference, solve_alpha_ode, solve_alpha_quadrature};

pub const GAMMA_IDENTITY_TOL: f64 = 1e-9;
pub const METHOD_AGREEMENT_TOL: f64 = 1e-8;
pub const ORACLE_TOL: f64 = 1e-4;
pub const STABILITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Serialize)]
pub struct GammaIdentityRow {
    pub pair: (String, String),
    pub big_gamma: f64,
    pub identity_value: f64,
    pub abs_diff: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MethodAgreementRow {
    pub spin: String,
    pub max_abs_diff: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleRow {
    pub pair: (String, String),
    pub theta_analytic: f64,
    pub theta_oracle: f64,
    pub gamma_analytic: f64,
    pub gamma_oracle: f64,
    pub abs_dtheta: f64,
    pub abs_dgamma: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct StabilityRow {
    pub pair: (String, String),
    pub abs_dtheta: f64,
    pub abs_dgamma: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub gamma_identity_tol: f64,
    pub method_agreement_tol: f64,
    pub oracle_tol: f64,
    pub stability_tol: f64,
    pub gamma_identity: Vec<GammaIdentityRow>,
    pub method_agreement: Vec<MethodAgreementRow>,
    pub oracle: Vec<OracleRow>,
    pub stability: Vec<StabilityRow>,
    #[serde(rename = "oracle_pulse_omega_peak_meV")]
    pub oracle_omega_peak: f64,
    pub oracle_n_max: usize,
    pub passed: bool,
}

impl VerifyReport {
    /// First breached tolerance, if any, as a `Tolerance` error.
    pub fn breach(&self) -> Option<Error> {
        for row in &self.gamma_identity {
            if row.abs_diff > GAMMA_IDENTITY_TOL {
                return Some(Error::Tolerance(format!(
                    "Gamma identity off by {:.3e} (tol {GAMMA_IDENTITY_TOL:e}) for pair ({}, {})",
                    row.abs_diff, row.pair.0, row.pair.1
                )));
            }
        }
        for row in &self.method_agreement {
            if row.max_abs_diff > METHOD_AGREEMENT_TOL {
                return Some(Error::Tolerance(format!(
                    "quadrature/ODE disagreement {:.3e} (tol {METHOD_AGREEMENT_TOL:e}) for spin {}",
                    row.max_abs_diff, row.spin
                )));
            }
        }
        for row in &self.oracle {
            if row.abs_dtheta > ORACLE_TOL || row.abs_dgamma > ORACLE_TOL {
                return Some(Error::Tolerance(format!(
                    "Fock oracle mismatch dtheta {:.3e} dGamma {:.3e} (tol {ORACLE_TOL:e}) for pair ({}, {})",
                    row.abs_dtheta, row.abs_dgamma, row.pair.0, row.pair.1
                )));
            }
        }
        for row in &self.stability {
            if row.abs_dtheta > STABILITY_TOL || row.abs_dgamma > STABILITY_TOL {
                return Some(Error::Tolerance(format!(
                    "truncation instability dtheta {:.3e} dGamma {:.3e} (tol {STABILITY_TOL:e})",
                    row.abs_dtheta, row.abs_dgamma
                )));
            }
        }
        None
    }
}

const DISTINCT: [SpinConfig; 3] = [SpinConfig::UpUp, SpinConfig::DownDown, SpinConfig::UpDown];

/// Run every cross-check for the resolved configuration.
pub fn run_verify(run: &ResolvedRun) -> Result<VerifyReport> {
    let pulse = run.pulse;
    let grid = TimeGrid::for_pulse(
        &pulse,
        run.detunings.max_abs(),
        run.gamma_energy,
        run.n_samples,
    )?;

    // trajectories for both methods, three distinct configurations
    let mut gamma_rows = Vec::new();
    let mut method_rows = Vec::new();
    let mut ode = Vec::new();
    for spin in DISTINCT {
        let delta = run.detunings.get(spin);
        let a = solve_alpha_ode(delta, run.gamma_energy, &pulse, &grid, spin)?;
        let b = solve_alpha_quadrature(delta, run.gamma_energy, &pulse, &grid, spin)?;
        method_rows.push(MethodAgreementRow {
            spin: spin.label().to_string(),
            max_abs_diff: max_elementwise_difference(&a, &b)?,
        });
        ode.push(a);
    }
    for i in 0..DISTINCT.len() {
        for j in i + 1..DISTINCT.len() {
            let pair = phase_difference(&ode[i], &ode[j], &pulse)?;
            let identity = gamma_identity_value(&ode[i], &ode[j])?;
            gamma_rows.push(GammaIdentityRow {
                pair: (
                    DISTINCT[i].label().to_string(),
                    DISTINCT[j].label().to_string(),
                ),
                big_gamma: pair.big_gamma(),
                identity_value: identity,
                abs_diff: (pair.big_gamma() - identity).abs(),
            });
        }
    }

    // Fock oracle at (possibly) scaled amplitude and fixture width
    let oracle_tau = run.oracle.tau.unwrap_or(pulse.tau);
    let oracle_pulse = Pulse::gaussian(pulse.omega_peak * run.oracle.amplitude_scale, oracle_tau);
    let oracle_grid = TimeGrid::for_pulse(
        &oracle_pulse,
        run.detunings.max_abs(),
        run.gamma_energy,
        None,
    )?;
    let mut oracle_traj = Vec::new();
    for spin in DISTINCT {
        oracle_traj.push(solve_alpha_ode(
            run.detunings.get(spin),
            run.gamma_energy,
            &oracle_pulse,
            &oracle_grid,
            spin,
        )?);
    }
    let mut oracle_rows = Vec::new();
    let mut stability_rows = Vec::new();
    for i in 0..DISTINCT.len() {
        for j in i + 1..DISTINCT.len() {
            let analytic = phase_difference(&oracle_traj[i], &oracle_traj[j], &oracle_pulse)?;
            let block = evolve_block(
                run.detunings.get(DISTINCT[i]),
                run.detunings.get(DISTINCT[j]),
                run.gamma_energy,
                &oracle_pulse,
                run.oracle.n_max,
                &oracle_grid,
                (DISTINCT[i], DISTINCT[j]),
            )?;
            let (theta_o, gamma_o) = extract_phase(&block)?;
            oracle_rows.push(OracleRow {
                pair: (
                    DISTINCT[i].label().to_string(),
                    DISTINCT[j].label().to_string(),
                ),
                theta_analytic: analytic.theta(),
                theta_oracle: theta_o,
                gamma_analytic: analytic.big_gamma(),
                gamma_oracle: gamma_o,
                abs_dtheta: wrap_angle(theta_o - analytic.theta()).abs(),
                abs_dgamma: (gamma_o - analytic.big_gamma()).abs(),
            });

            let block_larger = evolve_block(
                run.detunings.get(DISTINCT[i]),
                run.detunings.get(DISTINCT[j]),
                run.gamma_energy,
                &oracle_pulse,
                run.oracle.n_max + 10,
                &oracle_grid,
                (DISTINCT[i], DISTINCT[j]),
            )?;
            let (theta_l, gamma_l) = extract_phase(&block_larger)?;
            stability_rows.push(StabilityRow {
                pair: (
                    DISTINCT[i].label().to_string(),
                    DISTINCT[j].label().to_string(),
                ),
                abs_dtheta: wrap_angle(theta_l - theta_o).abs(),
                abs_dgamma: (gamma_l - gamma_o).abs(),
            });
        }
    }

    let mut report = VerifyReport {
        gamma_identity_tol: GAMMA_IDENTITY_TOL,
        method_agreement_tol: METHOD_AGREEMENT_TOL,
        oracle_tol: ORACLE_TOL,
        stability_tol: STABILITY_TOL,
        gamma_identity: gamma_rows,
        method_agreement: method_rows,
        oracle: oracle_rows,
        stability: stability_rows,
        oracle_omega_peak: oracle_pulse.omega_peak,
        oracle_n_max: run.oracle.n_max,
        passed: false,
    };
    report.passed = report.breach().is_none();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{OracleConfig, ResolvedRun};
    use crate::device::{derive_cavity, detunings, DeviceParams};

    fn small_run() -> ResolvedRun {
        let derived = derive_cavity(&DeviceParams::gaas_reference()).unwrap();
        ResolvedRun {
            derived,
            pulse: Pulse::gaussian(1.0, 10.0),
            n_samples: None,
            gamma_energy: 3.0,
            detunings: detunings(1.001, 2.0, 0.5).unwrap(),
            oracle: OracleConfig {
                n_max: 24,
                amplitude_scale: 1.0,
                tau: None,
            },
            sweep: None,
        }
    }

    #[test]
    fn small_fixture_passes_all_tolerances() {
        let report = run_verify(&small_run()).unwrap();
        assert!(
            report.passed,
            "verify failed: {:?}",
            report.breach().map(|e| e.to_string())
        );
        for row in &report.oracle {
            assert!(row.abs_dtheta <= ORACLE_TOL);
            assert!(row.abs_dgamma <= ORACLE_TOL);
        }
    }

    #[test]
    fn zero_drive_verifies_with_zero_phases() {
        let mut run = small_run();
        run.pulse = Pulse::gaussian(0.0, 5.0);
        let report = run_verify(&run).unwrap();
        assert!(report.passed);
        for row in &report.oracle {
            assert!(row.theta_oracle.abs() < 1e-12);
            assert!(row.gamma_oracle.abs() < 1e-12);
        }
    }

    #[test]
    fn coarse_explicit_grid_fails_with_step_rule() {
        let mut run = small_run();
        run.n_samples = Some(101);
        let err = run_verify(&run).unwrap_err();
        assert!(matches!(err, Error::StepRule { .. }));
    }
}
