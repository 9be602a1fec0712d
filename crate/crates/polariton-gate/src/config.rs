//! Run configuration: JSON in, validated physics out.
//!
//! Every physical key carries its unit suffix (`gamma_meV`, `tau_ps`, …).
//! The run is fully deterministic — there is no randomness anywhere to seed.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::device::{derive_cavity, detunings, DetuningMap, DeviceDerived, DeviceParams};
use crate::error::{Error, Result};
use crate::pulse::{Pulse, PulseShape};
use crate::sweep::SweepSpec;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseConfig {
    #[serde(default = "default_shape")]
    pub shape: PulseShape,
    #[serde(rename = "omega_peak_meV")]
    pub omega_peak: f64,
    #[serde(rename = "tau_ps")]
    pub tau: f64,
    /// Defaults to 2τ (gaussian) so the window [0, 4τ] holds the pulse.
    #[serde(rename = "t_center_ps", default)]
    pub t_center: Option<f64>,
    #[serde(rename = "window_ps", default)]
    pub window: Option<[f64; 2]>,
    /// Explicit sample count; omitted → default raised by the step rule.
    #[serde(default)]
    pub n_samples: Option<usize>,
}

fn default_shape() -> PulseShape {
    PulseShape::Gaussian
}

impl PulseConfig {
    pub fn build(&self) -> Result<Pulse> {
        let mut pulse = match self.shape {
            PulseShape::Gaussian => Pulse::gaussian(self.omega_peak, self.tau),
            PulseShape::Square => Pulse::square(
                self.omega_peak,
                self.tau,
                self.t_center.unwrap_or(2.0 * self.tau),
                self.window
                    .map(|w| (w[0], w[1]))
                    .unwrap_or((0.0, 4.0 * self.tau)),
            ),
        };
        if let Some(tc) = self.t_center {
            pulse.t_center = tc;
        }
        if let Some(w) = self.window {
            pulse.window = (w[0], w[1]);
        }
        pulse.validate()?;
        Ok(pulse)
    }
}

/// Optional overrides: when absent, γ and V come from the device derivation.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicsConfig {
    #[serde(rename = "gamma_meV", default)]
    pub gamma: Option<f64>,
    #[serde(rename = "v_ueV", default)]
    pub v_uev: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportPoint {
    pub tau_ps: f64,
    #[serde(rename = "omega_meV")]
    pub omega_mev: f64,
}

fn default_tau_range() -> [f64; 2] {
    // centred on the located-optimum defaults: [0.5, 1.5]·201.88
    [100.94, 302.82]
}

fn default_omega_range() -> [f64; 2] {
    [79.94, 239.82]
}

fn default_count() -> usize {
    25
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(rename = "tau_ps", default = "default_tau_range")]
    pub tau_range: [f64; 2],
    #[serde(default = "default_count")]
    pub tau_count: usize,
    #[serde(rename = "omega_meV", default = "default_omega_range")]
    pub omega_range: [f64; 2],
    #[serde(default = "default_count")]
    pub omega_count: usize,
    /// Parameter point the sweep report analyses for local maximality.
    #[serde(default)]
    pub report_point: Option<ReportPoint>,
}

fn default_n_max() -> usize {
    40
}

fn default_amplitude_scale() -> f64 {
    1.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleConfig {
    #[serde(default = "default_n_max")]
    pub n_max: usize,
    /// Factor applied to the pulse peak before the Fock-space run.
    #[serde(default = "default_amplitude_scale")]
    pub amplitude_scale: f64,
    /// Pulse width for the oracle fixture; defaults to the run pulse width.
    #[serde(rename = "tau_ps", default)]
    pub tau: Option<f64>,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            n_max: default_n_max(),
            amplitude_scale: default_amplitude_scale(),
            tau: None,
        }
    }
}

/// Top-level run configuration (JSON).
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub device: DeviceParams,
    pub pulse: PulseConfig,
    #[serde(default)]
    pub physics: PhysicsConfig,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub oracle: Option<OracleConfig>,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let config: RunConfig = serde_json::from_str(&text)?;
        Ok(config)
    }

    /// Validate every referenced section and derive the physics the commands
    /// run on.
    pub fn resolve(&self) -> Result<ResolvedRun> {
        self.device.validate()?;
        let derived = derive_cavity(&self.device)?;
        let pulse = self.pulse.build()?;
        if let Some(g) = self.physics.gamma {
            if g < 0.0 {
                return Err(Error::invalid(format!(
                    "physics.gamma_meV must be >= 0, got {g}"
                )));
            }
        }
        if let Some(v) = self.physics.v_uev {
            if v < 0.0 {
                return Err(Error::invalid(format!(
                    "physics.v_ueV must be >= 0, got {v}"
                )));
            }
        }
        let gamma_energy = self.physics.gamma.unwrap_or(derived.gamma_energy);
        let dets = match self.physics.v_uev {
            Some(v) => detunings(self.device.delta_p, v, self.device.r0_sq)?,
            None => derived.detunings,
        };
        if let Some(sweep) = &self.sweep {
            self.sweep_spec_from(sweep, &dets, gamma_energy)?
                .validate()?;
        }
        if let Some(oracle) = &self.oracle {
            if oracle.amplitude_scale <= 0.0 {
                return Err(Error::invalid(format!(
                    "oracle.amplitude_scale must be > 0, got {}",
                    oracle.amplitude_scale
                )));
            }
            if oracle.n_max < 2 {
                return Err(Error::invalid(format!(
                    "oracle.n_max must be >= 2, got {}",
                    oracle.n_max
                )));
            }
        }
        Ok(ResolvedRun {
            derived,
            pulse,
            n_samples: self.pulse.n_samples,
            gamma_energy,
            detunings: dets,
            oracle: self.oracle.clone().unwrap_or_default(),
            sweep: self.sweep.clone(),
        })
    }

    fn sweep_spec_from(
        &self,
        sweep: &SweepConfig,
        dets: &DetuningMap,
        gamma_energy: f64,
    ) -> Result<SweepSpec> {
        Ok(SweepSpec {
            tau_min: sweep.tau_range[0],
            tau_max: sweep.tau_range[1],
            tau_count: sweep.tau_count,
            omega_min: sweep.omega_range[0],
            omega_max: sweep.omega_range[1],
            omega_count: sweep.omega_count,
            detunings: *dets,
            gamma_energy,
        })
    }
}

/// Validated, derived inputs for the commands.
#[derive(Debug, Clone)]
pub struct ResolvedRun {
    pub derived: DeviceDerived,
    pub pulse: Pulse,
    pub n_samples: Option<usize>,
    pub gamma_energy: f64,
    pub detunings: DetuningMap,
    pub oracle: OracleConfig,
    pub sweep: Option<SweepConfig>,
}

impl ResolvedRun {
    pub fn sweep_spec(&self) -> Result<SweepSpec> {
        let sweep = self
            .sweep
            .as_ref()
            .ok_or_else(|| Error::invalid("config has no sweep section".to_string()))?;
        Ok(SweepSpec {
            tau_min: sweep.tau_range[0],
            tau_max: sweep.tau_range[1],
            tau_count: sweep.tau_count,
            omega_min: sweep.omega_range[0],
            omega_max: sweep.omega_range[1],
            omega_count: sweep.omega_count,
            detunings: self.detunings,
            gamma_energy: self.gamma_energy,
        })
    }
}
