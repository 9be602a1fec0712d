//! Simulator for a spin-conditioned, coherently driven, lossy cavity
//! polariton mode.
//!
//! Two localized electron spins shift the driven mode's resonance through an
//! exchange coupling, so each two-spin configuration sees its own detuning
//! δ_s. A pulsed drive walks the mode around a loop in phase space; the loop
//! area is spin-conditioned, which makes the accumulated phase a two-qubit
//! controlled-Z resource. Photon loss turns the pure phases into a mixture,
//! and the whole point of the artifact is to quantify that tradeoff:
//!
//! - [`device`]: geometry → lifetimes, spot size, exchange coupling,
//!   detunings, pump power.
//! - [`pulse`] / [`trajectory`]: drive envelopes and the coherent-state
//!   trajectory α_s(t), by RK4 and by quadrature of the closed-form
//!   convolution.
//! - [`phase`]: the pairwise phase functional (Θ, Γ), the post-gate density
//!   matrix, controlled-Z fidelity, gate conditions and leakage metrics.
//! - [`fock`]: an independent truncated-Fock Lindblad oracle for the same
//!   phases.
//! - [`sweep`]: fidelity over the (τ, Ω) plane and compass-search refinement.
//! - [`config`] / [`report`] / [`verify`]: config loading, file emission and
//!   the cross-validation pipeline behind the CLI.
//!
//! Units everywhere: meV, ps, nm/µm, with ħ = 0.6582120 meV·ps.

pub mod config;
pub mod device;
pub mod error;
pub mod fock;
pub mod gate;
pub mod numerics;
pub mod phase;
pub mod pulse;
pub mod report;
pub mod sweep;
pub mod trajectory;
pub mod units;
pub mod verify;

pub use error::{Error, Result};
