//! Drive pulse Ω(t) and the uniform time grid the integrators run on.
//!
//! The gaussian envelope is Ω(t) = Ω_peak·e^{−((t−t_c)/τ)²}, recentred at
//! t_c = 2τ on the default window [0, 4τ]. At the window edges the envelope
//! is e^{−4} ≈ 1.8% of peak; that truncation is part of the model. The
//! square shape exists as an analytic test fixture only.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{require_nonnegative, require_ordered, require_positive, Error, Result};
use crate::units::HBAR_MEV_PS;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PulseShape {
    Gaussian,
    Square,
}

/// Drive envelope description. Energies in meV, times in ps.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Pulse {
    pub shape: PulseShape,
    #[serde(rename = "omega_peak_meV")]
    pub omega_peak: f64,
    #[serde(rename = "tau_ps")]
    pub tau: f64,
    #[serde(rename = "t_center_ps")]
    pub t_center: f64,
    #[serde(rename = "window_ps")]
    pub window: (f64, f64),
}

impl Pulse {
    /// Gaussian pulse on the default gate window [0, 4τ], centred at 2τ.
    pub fn gaussian(omega_peak: f64, tau: f64) -> Self {
        Pulse {
            shape: PulseShape::Gaussian,
            omega_peak,
            tau,
            t_center: 2.0 * tau,
            window: (0.0, 4.0 * tau),
        }
    }

    /// Square fixture: `omega_peak` on [t_center − width/2, t_center + width/2).
    pub fn square(omega_peak: f64, width: f64, t_center: f64, window: (f64, f64)) -> Self {
        Pulse {
            shape: PulseShape::Square,
            omega_peak,
            tau: width,
            t_center,
            window,
        }
    }

    pub fn validate(&self) -> Result<()> {
        require_nonnegative("pulse.omega_peak_meV", self.omega_peak)?;
        require_positive("pulse.tau_ps", self.tau)?;
        require_ordered("pulse window (ps)", self.window.0, self.window.1)?;
        Ok(())
    }

    /// Envelope value at time t (meV). Nonnegative everywhere; the gaussian
    /// peaks at `omega_peak` at `t_center`; the square is `omega_peak` on
    /// [t_center − τ/2, t_center + τ/2) and zero outside.
    pub fn envelope(&self, t: f64) -> f64 {
        match self.shape {
            PulseShape::Gaussian => {
                let x = (t - self.t_center) / self.tau;
                self.omega_peak * (-x * x).exp()
            }
            PulseShape::Square => {
                let on = self.t_center - 0.5 * self.tau;
                let off = self.t_center + 0.5 * self.tau;
                if t >= on && t < off {
                    self.omega_peak
                } else {
                    0.0
                }
            }
        }
    }

    /// Envelope as the integrators see it for a step whose interior midpoint
    /// is `mid`. Smooth shapes evaluate at the true substep time `t`; the
    /// square fixture is constant within a step (branch picked by `mid`), so
    /// grid-aligned edges do not leak one-sided errors into the substeps.
    #[inline]
    pub(crate) fn sample(&self, t: f64, mid: f64) -> f64 {
        match self.shape {
            PulseShape::Gaussian => self.envelope(t),
            PulseShape::Square => self.envelope(mid),
        }
    }
}

/// Uniform time grid: t_k = t0 + k·dt for k in 0..n.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeGrid {
    pub t0: f64,
    pub dt: f64,
    pub n: usize,
}

/// Default sample count before the step rule raises it. One above the nominal
/// 4096 so the interval count is even, as composite Simpson requires.
pub const DEFAULT_SAMPLES: usize = 4097;

impl TimeGrid {
    pub fn new(t0: f64, dt: f64, n: usize) -> Result<Self> {
        require_positive("grid dt (ps)", dt)?;
        if n < 2 {
            return Err(Error::invalid(format!(
                "grid needs at least 2 samples, got {n}"
            )));
        }
        Ok(TimeGrid { t0, dt, n })
    }

    /// Grid spanning `[a, b]` with `n` samples (bumped by one if even, so the
    /// interval count stays even).
    pub fn span(a: f64, b: f64, n: usize) -> Result<Self> {
        require_ordered("grid span (ps)", a, b)?;
        let n = if n.is_multiple_of(2) { n + 1 } else { n };
        if n < 3 {
            return Err(Error::invalid(format!(
                "grid needs at least 3 samples, got {n}"
            )));
        }
        Ok(TimeGrid {
            t0: a,
            dt: (b - a) / (n - 1) as f64,
            n,
        })
    }

    /// Build the grid for a pulse: window from the pulse, sample count raised
    /// from the default until the step rule holds. An explicit `n` is
    /// enforced instead — if it violates the rule the caller gets a
    /// [`Error::StepRule`], never a silently subsampled run.
    pub fn for_pulse(
        pulse: &Pulse,
        delta_abs_max: f64,
        gamma_energy: f64,
        n_explicit: Option<usize>,
    ) -> Result<Self> {
        pulse.validate()?;
        let (a, b) = pulse.window;
        let span = b - a;
        let limit = step_limit(delta_abs_max, gamma_energy, pulse.omega_peak, pulse.tau);
        let grid = match n_explicit {
            Some(n) => TimeGrid::span(a, b, n)?,
            None => {
                let needed = (span / limit).ceil() as usize + 1;
                TimeGrid::span(a, b, needed.max(DEFAULT_SAMPLES))?
            }
        };
        grid.check_step_rule(limit, span)?;
        Ok(grid)
    }

    /// Enforce dt ≤ limit; the error names the rule and the sample count that
    /// would satisfy it.
    pub fn check_step_rule(&self, limit: f64, span: f64) -> Result<()> {
        if self.dt > limit * (1.0 + 1e-12) {
            return Err(Error::StepRule {
                dt: self.dt,
                limit,
                required_n: (span / limit).ceil() as usize + 1,
            });
        }
        Ok(())
    }

    #[inline]
    pub fn t(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt
    }

    pub fn t_end(&self) -> f64 {
        self.t(self.n - 1)
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |k| self.t(k))
    }

    /// True when the grid window contains the pulse window.
    pub fn covers(&self, pulse: &Pulse) -> bool {
        self.t0 <= pulse.window.0 + 1e-12 && self.t_end() >= pulse.window.1 - 1e-12
    }
}

/// Integrator step limit: dt ≤ min(ħ/(20·max(|δ|, γ, Ω_peak)), τ/200).
pub fn step_limit(delta_abs_max: f64, gamma_energy: f64, omega_peak: f64, tau: f64) -> f64 {
    let fastest = delta_abs_max
        .abs()
        .max(gamma_energy.abs())
        .max(omega_peak.abs())
        .max(1e-300);
    (HBAR_MEV_PS / (20.0 * fastest)).min(tau / 200.0)
}

/// Complex kernel rate z = (iδ + γ/2)/ħ entering e^{−z(t−s)}.
pub(crate) fn kernel_rate(delta: f64, gamma_energy: f64) -> Complex64 {
    Complex64::new(0.5 * gamma_energy, delta) / HBAR_MEV_PS
}
