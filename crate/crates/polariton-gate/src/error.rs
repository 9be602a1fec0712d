//! Error type shared across the crate.
//!
//! Two classes matter to callers: configuration/validation problems
//! (`is_validation`) and numerical-tolerance breaches (`is_tolerance`).
//! The CLI maps them to exit codes 1 and 2 respectively.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter or config section failed validation. The message names
    /// the offending field and the bound it violated.
    #[error("invalid input: {0}")]
    Invalid(String),

    /// The requested time grid violates the integrator step rule
    /// dt ≤ min(ħ/(20·max(|δ|, γ, Ω_peak)), τ/200).
    #[error(
        "step rule violated: dt = {dt} ps exceeds the limit {limit} ps \
         (dt ≤ min(hbar/(20·max(|delta|, gamma, omega_peak)), tau/200)); \
         at least {required_n} samples are required over this window"
    )]
    StepRule {
        dt: f64,
        limit: f64,
        required_n: usize,
    },

    /// Two trajectories that must share a grid do not.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// Fock-space truncation invariant violated during oracle evolution.
    #[error(
        "Fock truncation too small: population reached {population:.3e} at level {n_max} \
         (limit 1e-10); n_max of at least {required} is needed for this drive"
    )]
    Truncation {
        n_max: usize,
        population: f64,
        required: usize,
    },

    /// A phase pair required for density-matrix assembly is missing.
    #[error("missing phase pair ({0}, {1})")]
    MissingPair(&'static str, &'static str),

    /// Block trace too small to extract a phase from.
    #[error("vanishing block trace |Tr C| = {0:.3e}: state fully dephased, phase undefined")]
    VanishingTrace(f64),

    /// A numerical cross-check failed its stated tolerance.
    #[error("tolerance breach: {0}")]
    Tolerance(String),

    /// A sweep point failed; coordinates attached, run poisoned.
    #[error("sweep point (tau = {tau} ps, omega = {omega} meV) failed: {source}")]
    SweepPoint {
        tau: f64,
        omega: f64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("config parse error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    /// True for errors caused by bad inputs rather than numerics.
    pub fn is_validation(&self) -> bool {
        !self.is_tolerance()
    }

    /// True when a numerical cross-check missed its tolerance.
    pub fn is_tolerance(&self) -> bool {
        match self {
            Error::Tolerance(_) => true,
            Error::SweepPoint { source, .. } => source.is_tolerance(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Validation guard: finite and strictly positive (NaN rejected).
pub fn require_positive(field: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "{field} must be finite and > 0, got {v}"
        )))
    }
}

/// Validation guard: finite and nonnegative (NaN rejected).
pub fn require_nonnegative(field: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "{field} must be finite and >= 0, got {v}"
        )))
    }
}

/// Validation guard: a strictly ordered finite interval (NaN rejected).
pub fn require_ordered(field: &str, lo: f64, hi: f64) -> Result<()> {
    if lo.is_finite() && hi.is_finite() && hi > lo {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "{field} must be an ordered interval, got [{lo}, {hi}]"
        )))
    }
}
