//! Fixed unit system shared by every module.
//!
//! Energies are meV, times are ps, lengths are nm (device geometry) or µm
//! (spot sizes). Every dynamical phase is an (energy / ħ) · time product, so
//! `HBAR_MEV_PS` is the single conversion constant the integrators use.

/// Reduced Planck constant, meV·ps.
pub const HBAR_MEV_PS: f64 = 0.6582120;

/// Planck constant h = 2πħ, meV·ps.
pub const H_MEV_PS: f64 = 2.0 * std::f64::consts::PI * HBAR_MEV_PS;

/// Speed of light, nm/ps.
pub const C_NM_PER_PS: f64 = 299_792.458;

/// Coulomb constant e²/(4πε₀), meV·nm.
pub const COULOMB_MEV_NM: f64 = 1439.96;

/// 1 meV/ps expressed in mW (1 eV/s = 1.602177e−19 W).
pub const MEV_PER_PS_IN_MW: f64 = 1.602177e-7;

/// Laser angular frequency 2πc/λ in rad/ps for a vacuum wavelength in nm.
pub fn angular_frequency_rad_per_ps(lambda_nm: f64) -> f64 {
    2.0 * std::f64::consts::PI * C_NM_PER_PS / lambda_nm
}
