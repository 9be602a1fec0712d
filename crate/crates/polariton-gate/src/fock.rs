//! Truncated-Fock Lindblad oracle.
//!
//! Independent validation of the coherent-state/phase solution: each
//! configuration pair (i, j) gets an operator block C(t) evolving as
//!
//!   dC/dt = −(i/ħ)(H_i C − C H_j) + (γ/ħ)(p C p† − ½p†pC − ½Cp†p),
//!
//! with H_s = δ_s·p†p + Ω(t)(p† + p) and C(0) = |0⟩⟨0|. For i = j this is
//! the standard zero-temperature Lindblad evolution (trace preserving,
//! coherent state stays pure and Poissonian); for i ≠ j the block trace
//! Tr C(t_end) reproduces e^{iΘ_ij − Γ_ij} of the analytic phase functional.
//!
//! The structured operators (number scaling, ladder shifts) are applied
//! entrywise in O(d²) per right-hand side; the integrator is the same
//! classical fixed-step RK4 the trajectory solver uses.

use num_complex::Complex64;

use crate::device::SpinConfig;
use crate::error::{Error, Result};
use crate::pulse::{step_limit, Pulse, TimeGrid};
use crate::trajectory::solve_alpha_ode;
use crate::units::HBAR_MEV_PS;

/// Truncation-validity bound: population allowed at the top Fock level.
pub const TRUNCATION_LIMIT: f64 = 1e-10;

/// One (i, j) operator block in a Fock space truncated at `n_max`.
#[derive(Debug, Clone)]
pub struct FockBlock {
    pub n_max: usize,
    pub pair: (SpinConfig, SpinConfig),
    /// (n_max+1)² complex entries, row-major.
    pub matrix: Vec<Complex64>,
}

impl FockBlock {
    pub fn dim(&self) -> usize {
        self.n_max + 1
    }

    #[inline]
    pub fn get(&self, n: usize, m: usize) -> Complex64 {
        self.matrix[n * self.dim() + m]
    }

    pub fn trace(&self) -> Complex64 {
        let d = self.dim();
        (0..d).map(|n| self.matrix[n * d + n]).sum()
    }

    /// Fock populations (diagonal, real parts).
    pub fn populations(&self) -> Vec<f64> {
        let d = self.dim();
        (0..d).map(|n| self.matrix[n * d + n].re).collect()
    }

    /// Tr C² for a Hermitian diagonal block: Σ|C_nm|².
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// n_max needed for a drive whose analytic peak amplitude is `alpha_max`:
/// ⌈|α|²max + 6√(|α|²max) + 10⌉.
pub fn required_n_max(alpha_max: f64) -> usize {
    let nbar = alpha_max * alpha_max;
    (nbar + 6.0 * nbar.sqrt() + 10.0).ceil() as usize
}

/// RHS of the block equation, written entrywise:
///
/// out[n][m] = −(i/ħ)[(δᵢn − δⱼm)C_nm + Ω(√(n+1)C_{n+1,m} + √n C_{n−1,m}
///             − √m C_{n,m−1} − √(m+1)C_{n,m+1})]
///             + (γ/ħ)[√((n+1)(m+1))C_{n+1,m+1} − ((n+m)/2)C_nm]
#[allow(clippy::too_many_arguments)]
fn rhs(
    c: &[Complex64],
    out: &mut [Complex64],
    dim: usize,
    delta_i: f64,
    delta_j: f64,
    gamma: f64,
    env: f64,
    sqrt: &[f64],
) {
    let minus_i_over_hbar = Complex64::new(0.0, -1.0 / HBAR_MEV_PS);
    let gamma_rate = gamma / HBAR_MEV_PS;
    for n in 0..dim {
        let row = n * dim;
        for m in 0..dim {
            let idx = row + m;
            let mut h = (delta_i * n as f64 - delta_j * m as f64) * c[idx];
            if env != 0.0 {
                let mut drive = Complex64::new(0.0, 0.0);
                if n + 1 < dim {
                    drive += sqrt[n + 1] * c[idx + dim];
                }
                if n > 0 {
                    drive += sqrt[n] * c[idx - dim];
                }
                if m > 0 {
                    drive -= sqrt[m] * c[idx - 1];
                }
                if m + 1 < dim {
                    drive -= sqrt[m + 1] * c[idx + 1];
                }
                h += env * drive;
            }
            let mut l = -0.5 * (n + m) as f64 * c[idx];
            if n + 1 < dim && m + 1 < dim {
                l += sqrt[n + 1] * sqrt[m + 1] * c[idx + dim + 1];
            }
            out[idx] = minus_i_over_hbar * h + gamma_rate * l;
        }
    }
}

/// Evolve the (i, j) block from vacuum over the grid window.
///
/// Preconditions: `n_max ≥ required_n_max(analytic |α|max)` for both
/// detunings, and the grid obeys the trajectory step rule. The top-level
/// population is checked at every step; a breach reports the `n_max` that
/// would have sufficed.
pub fn evolve_block(
    delta_i: f64,
    delta_j: f64,
    gamma_energy: f64,
    pulse: &Pulse,
    n_max: usize,
    grid: &TimeGrid,
    pair: (SpinConfig, SpinConfig),
) -> Result<FockBlock> {
    pulse.validate()?;
    let limit = step_limit(
        delta_i.abs().max(delta_j.abs()),
        gamma_energy,
        pulse.omega_peak,
        pulse.tau,
    );
    grid.check_step_rule(limit, grid.t_end() - grid.t0)?;

    // amplitude estimate from the analytic trajectory
    let mut alpha_max = 0.0f64;
    for (delta, spin) in [(delta_i, pair.0), (delta_j, pair.1)] {
        let traj = solve_alpha_ode(delta, gamma_energy, pulse, grid, spin)?;
        alpha_max = alpha_max.max(traj.max_abs());
    }
    let required = required_n_max(alpha_max);
    if n_max < required {
        return Err(Error::Truncation {
            n_max,
            population: f64::NAN,
            required,
        });
    }

    let dim = n_max + 1;
    let sqrt: Vec<f64> = (0..=dim).map(|k| (k as f64).sqrt()).collect();
    let mut c = vec![Complex64::new(0.0, 0.0); dim * dim];
    c[0] = Complex64::new(1.0, 0.0);

    let dt = grid.dt;
    let mut k1 = vec![Complex64::new(0.0, 0.0); dim * dim];
    let mut k2 = k1.clone();
    let mut k3 = k1.clone();
    let mut k4 = k1.clone();
    let mut stage = k1.clone();

    for k in 0..grid.n - 1 {
        let t = grid.t(k);
        let mid = t + 0.5 * dt;
        let e0 = pulse.sample(t, mid);
        let em = pulse.sample(mid, mid);
        let e1 = pulse.sample(t + dt, mid);

        rhs(&c, &mut k1, dim, delta_i, delta_j, gamma_energy, e0, &sqrt);
        for (s, (y, d)) in stage.iter_mut().zip(c.iter().zip(&k1)) {
            *s = y + 0.5 * dt * d;
        }
        rhs(
            &stage,
            &mut k2,
            dim,
            delta_i,
            delta_j,
            gamma_energy,
            em,
            &sqrt,
        );
        for (s, (y, d)) in stage.iter_mut().zip(c.iter().zip(&k2)) {
            *s = y + 0.5 * dt * d;
        }
        rhs(
            &stage,
            &mut k3,
            dim,
            delta_i,
            delta_j,
            gamma_energy,
            em,
            &sqrt,
        );
        for (s, (y, d)) in stage.iter_mut().zip(c.iter().zip(&k3)) {
            *s = y + dt * d;
        }
        rhs(
            &stage,
            &mut k4,
            dim,
            delta_i,
            delta_j,
            gamma_energy,
            e1,
            &sqrt,
        );
        for (idx, y) in c.iter_mut().enumerate() {
            *y += dt / 6.0 * (k1[idx] + 2.0 * k2[idx] + 2.0 * k3[idx] + k4[idx]);
        }

        let top = c[dim * dim - 1].norm();
        if top > TRUNCATION_LIMIT {
            return Err(Error::Truncation {
                n_max,
                population: top,
                required: required_n_max(alpha_max) + 10,
            });
        }
    }

    Ok(FockBlock {
        n_max,
        pair,
        matrix: c,
    })
}

/// Invert Tr C = e^{iθ − Γ}: θ = arg Tr C, Γ = −ln|Tr C|.
pub fn extract_phase(block: &FockBlock) -> Result<(f64, f64)> {
    let tr = block.trace();
    let norm = tr.norm();
    if norm <= 1e-12 {
        return Err(Error::VanishingTrace(norm));
    }
    Ok((tr.arg(), -norm.ln()))
}
