//! Device model: derives every physical quantity the dynamics needs from raw
//! cavity and dot geometry.
//!
//! Formulas (all in the crate unit system, meV / ps / nm / µm):
//!
//! - photon lifetime   τ_photon = n_c·L_c / (c·(1−r))
//! - spot radius       R = √(λ·L_c / (π·(1−r)·n_c))
//! - polariton lifetime τ_polariton = τ_photon / t₀²
//! - exchange coupling V = (e²/4πε₀)·a / (ε_r·R²), with the charge factor
//!   restored (the bare a/4πεR² is dimensionally short one e²)
//! - spin-conditioned detunings δ_↑↑ = δ_p − V·r₀², δ_↓↓ = δ_p + V·r₀²,
//!   δ_↑↓ = δ_↓↑ = δ_p
//! - pump power        P = Ω²·ω·τ_photon/ħ with ω = 2πc/λ

use serde::{Deserialize, Serialize};

use crate::error::{require_nonnegative, require_positive, Error, Result};
use crate::units::{
    angular_frequency_rad_per_ps, COULOMB_MEV_NM, C_NM_PER_PS, HBAR_MEV_PS, H_MEV_PS,
    MEV_PER_PS_IN_MW,
};

/// One of the four two-spin configurations. `UpDown` and `DownUp` always see
/// the same detuning.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpinConfig {
    UpUp,
    DownDown,
    UpDown,
    DownUp,
}

impl SpinConfig {
    /// Basis order used everywhere: (↑↑, ↓↓, ↑↓, ↓↑).
    pub const ALL: [SpinConfig; 4] = [
        SpinConfig::UpUp,
        SpinConfig::DownDown,
        SpinConfig::UpDown,
        SpinConfig::DownUp,
    ];

    pub fn index(self) -> usize {
        match self {
            SpinConfig::UpUp => 0,
            SpinConfig::DownDown => 1,
            SpinConfig::UpDown => 2,
            SpinConfig::DownUp => 3,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            SpinConfig::UpUp => "up_up",
            SpinConfig::DownDown => "down_down",
            SpinConfig::UpDown => "up_down",
            SpinConfig::DownUp => "down_up",
        }
    }
}

/// Map spin configuration → detuning δ_s (meV). The ↑↓/↓↑ degeneracy is
/// structural: both cross configurations read the same field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetuningMap {
    pub up_up: f64,
    pub down_down: f64,
    pub cross: f64,
}

impl DetuningMap {
    pub fn get(&self, s: SpinConfig) -> f64 {
        match s {
            SpinConfig::UpUp => self.up_up,
            SpinConfig::DownDown => self.down_down,
            SpinConfig::UpDown | SpinConfig::DownUp => self.cross,
        }
    }

    /// Largest |δ_s|, used by the integrator step rule.
    pub fn max_abs(&self) -> f64 {
        self.up_up
            .abs()
            .max(self.down_down.abs())
            .max(self.cross.abs())
    }
}

impl Serialize for DetuningMap {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = ser.serialize_map(Some(4))?;
        for s in SpinConfig::ALL {
            map.serialize_entry(s.label(), &self.get(s))?;
        }
        map.end()
    }
}

/// How the effective cavity length L_c is fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LcConvention {
    /// L_c = λ/2 (default: reproduces the quoted spot size and photon
    /// lifetime most closely).
    HalfWave,
    /// L_c = 5λ/2 (half-wave cavity plus DBR field penetration).
    FiveHalfWave,
    /// Explicit value in nm.
    ExplicitNm(f64),
}

impl LcConvention {
    pub fn length_nm(self, lambda_nm: f64) -> f64 {
        match self {
            LcConvention::HalfWave => lambda_nm / 2.0,
            LcConvention::FiveHalfWave => 2.5 * lambda_nm,
            LcConvention::ExplicitNm(l) => l,
        }
    }
}

impl Serialize for LcConvention {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            LcConvention::HalfWave => ser.serialize_str("half-wave"),
            LcConvention::FiveHalfWave => ser.serialize_str("five-half-wave"),
            LcConvention::ExplicitNm(l) => ser.serialize_f64(*l),
        }
    }
}

impl<'de> Deserialize<'de> for LcConvention {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl serde::de::Visitor<'_> for V {
            type Value = LcConvention;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                write!(
                    f,
                    "\"half-wave\", \"five-half-wave\", or an explicit length in nm"
                )
            }
            fn visit_str<E: serde::de::Error>(
                self,
                s: &str,
            ) -> std::result::Result<LcConvention, E> {
                match s {
                    "half-wave" => Ok(LcConvention::HalfWave),
                    "five-half-wave" => Ok(LcConvention::FiveHalfWave),
                    other => Err(E::custom(format!(
                        "lc_convention must be \"half-wave\", \"five-half-wave\" or a number (nm), got \"{other}\""
                    ))),
                }
            }
            fn visit_f64<E: serde::de::Error>(
                self,
                v: f64,
            ) -> std::result::Result<LcConvention, E> {
                Ok(LcConvention::ExplicitNm(v))
            }
            fn visit_u64<E: serde::de::Error>(
                self,
                v: u64,
            ) -> std::result::Result<LcConvention, E> {
                Ok(LcConvention::ExplicitNm(v as f64))
            }
            fn visit_i64<E: serde::de::Error>(
                self,
                v: i64,
            ) -> std::result::Result<LcConvention, E> {
                Ok(LcConvention::ExplicitNm(v as f64))
            }
        }
        de.deserialize_any(V)
    }
}

fn default_hopfield() -> f64 {
    0.5
}

/// Raw device geometry and material constants.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceParams {
    /// Vacuum wavelength (nm).
    #[serde(rename = "lambda_nm")]
    pub lambda: f64,
    /// Cavity refractive index.
    pub n_c: f64,
    /// DBR reflectivity, 0 < r < 1.
    pub r: f64,
    /// Effective-length rule.
    pub lc_convention: LcConvention,
    /// Localized-electron trap radius (nm).
    #[serde(rename = "a_nm")]
    pub a: f64,
    /// Exciton Bohr radius (nm). Carried for reporting; the closed-form V
    /// does not depend on it.
    #[serde(rename = "a_B_nm")]
    pub a_bohr: f64,
    /// Relative dielectric constant.
    pub eps_r: f64,
    /// Excitonic Hopfield fraction r₀².
    #[serde(default = "default_hopfield")]
    pub r0_sq: f64,
    /// Photonic Hopfield fraction t₀².
    #[serde(default = "default_hopfield")]
    pub t0_sq: f64,
    /// Bare polariton detuning from the laser (meV).
    #[serde(rename = "delta_p_meV")]
    pub delta_p: f64,
}

impl DeviceParams {
    /// The device used throughout the tests: λ = 786 nm, n_c = 3.5,
    /// r = 0.992, half-wave L_c, a = 50 nm, ε_r = 12.9.
    pub fn gaas_reference() -> Self {
        DeviceParams {
            lambda: 786.0,
            n_c: 3.5,
            r: 0.992,
            lc_convention: LcConvention::HalfWave,
            a: 50.0,
            a_bohr: 12.0,
            eps_r: 12.9,
            r0_sq: 0.5,
            t0_sq: 0.5,
            delta_p: 1.001,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r > 0.0 && self.r < 1.0) {
            return Err(Error::invalid(format!(
                "device.r (DBR reflectivity) must lie strictly in (0, 1), got {}",
                self.r
            )));
        }
        require_positive("device.lambda_nm", self.lambda)?;
        require_positive("device.n_c", self.n_c)?;
        if let LcConvention::ExplicitNm(l) = self.lc_convention {
            require_positive("device.lc_convention explicit length (nm)", l)?;
        }
        require_positive("device.a_nm", self.a)?;
        require_positive("device.a_B_nm", self.a_bohr)?;
        if self.eps_r.is_nan() || self.eps_r <= 1.0 {
            return Err(Error::invalid(format!(
                "device.eps_r must be > 1, got {}",
                self.eps_r
            )));
        }
        require_positive("device.r0_sq", self.r0_sq)?;
        require_positive("device.t0_sq", self.t0_sq)?;
        if (self.r0_sq + self.t0_sq - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!(
                "device.r0_sq + device.t0_sq must equal 1 within 1e-12, got {}",
                self.r0_sq + self.t0_sq
            )));
        }
        if !self.delta_p.is_finite() {
            return Err(Error::invalid(
                "device.delta_p_meV must be finite".to_string(),
            ));
        }
        Ok(())
    }
}

/// Everything the dynamics needs, derived from [`DeviceParams`].
#[derive(Debug, Clone, Serialize)]
pub struct DeviceDerived {
    /// Effective cavity length (nm).
    pub l_c_nm: f64,
    /// Cavity photon lifetime (ps).
    pub tau_photon_ps: f64,
    /// Polariton lifetime τ_photon/t₀² (ps).
    pub tau_polariton_ps: f64,
    /// Decay constant as an energy, h/τ_polariton (meV). This is the
    /// convention under which a 1.3 ps polariton lifetime reads as ≈3 meV.
    #[serde(rename = "gamma_energy_meV")]
    pub gamma_energy: f64,
    /// The alternative conversion ħ/τ_polariton (meV), reported alongside.
    #[serde(rename = "gamma_energy_hbar_over_tau_meV")]
    pub gamma_energy_hbar_over_tau: f64,
    /// Decay rate used in dynamics, gamma_energy/ħ (1/ps).
    pub gamma_rate_per_ps: f64,
    /// Polariton spot radius (µm).
    pub spot_radius_um: f64,
    /// Spot area πR² (µm²).
    pub spot_area_um2: f64,
    /// Exchange coupling at the derived spot radius (µeV).
    #[serde(rename = "v_ueV")]
    pub v_uev: f64,
    /// Quality-factor estimate ω·τ_photon (informational only).
    pub q_report: f64,
    /// Spin-conditioned detunings (meV).
    pub detunings: DetuningMap,
}

/// Derive lifetimes, spot size, coupling and detunings from raw geometry.
pub fn derive_cavity(params: &DeviceParams) -> Result<DeviceDerived> {
    params.validate()?;
    let l_c = params.lc_convention.length_nm(params.lambda);
    let one_minus_r = 1.0 - params.r;
    let tau_photon = params.n_c * l_c / (C_NM_PER_PS * one_minus_r);
    let r_nm = (params.lambda * l_c / (std::f64::consts::PI * one_minus_r * params.n_c)).sqrt();
    let r_um = r_nm / 1000.0;
    let tau_polariton = tau_photon / params.t0_sq;
    let gamma_energy = H_MEV_PS / tau_polariton;
    let v_uev = exchange_coupling(params.a, r_um, params.eps_r)?;
    let omega = angular_frequency_rad_per_ps(params.lambda);
    Ok(DeviceDerived {
        l_c_nm: l_c,
        tau_photon_ps: tau_photon,
        tau_polariton_ps: tau_polariton,
        gamma_energy,
        gamma_energy_hbar_over_tau: HBAR_MEV_PS / tau_polariton,
        gamma_rate_per_ps: gamma_energy / HBAR_MEV_PS,
        spot_radius_um: r_um,
        spot_area_um2: std::f64::consts::PI * r_um * r_um,
        v_uev,
        q_report: omega * tau_photon,
        detunings: detunings(params.delta_p, v_uev, params.r0_sq)?,
    })
}

/// Exchange coupling V = k_e·a/(ε_r·R²) in µeV, for a trap radius in nm and a
/// spot radius in µm.
pub fn exchange_coupling(a_nm: f64, r_um: f64, eps_r: f64) -> Result<f64> {
    require_positive("trap radius a (nm)", a_nm)?;
    require_positive("spot radius R (um)", r_um)?;
    require_positive("eps_r", eps_r)?;
    let r_nm = r_um * 1000.0;
    let v_mev = COULOMB_MEV_NM * a_nm / (eps_r * r_nm * r_nm);
    Ok(v_mev * 1000.0)
}

/// Spin-conditioned detunings from the bare detuning δ_p (meV), the exchange
/// coupling V (µeV) and the excitonic Hopfield fraction r₀².
pub fn detunings(delta_p_mev: f64, v_uev: f64, r0_sq: f64) -> Result<DetuningMap> {
    require_nonnegative("exchange coupling V (ueV)", v_uev)?;
    let split = v_uev * 1e-3 * r0_sq;
    Ok(DetuningMap {
        up_up: delta_p_mev - split,
        down_down: delta_p_mev + split,
        cross: delta_p_mev,
    })
}

/// Peak pump power P = Ω²·ω·τ_photon/ħ, converted to mW.
pub fn pump_power(omega_peak_mev: f64, lambda_nm: f64, tau_photon_ps: f64) -> Result<f64> {
    require_nonnegative("omega_peak (meV)", omega_peak_mev)?;
    require_positive("lambda (nm)", lambda_nm)?;
    require_positive("tau_photon (ps)", tau_photon_ps)?;
    let omega = angular_frequency_rad_per_ps(lambda_nm);
    Ok(omega_peak_mev * omega_peak_mev * omega * tau_photon_ps / HBAR_MEV_PS * MEV_PER_PS_IN_MW)
}
