//! Physical constants (SI, CODATA 2018) and the Matsubara frequency ladder.
//!
//! Constants are fixed at build time so golden outputs stay reproducible.

use crate::error::{Error, Result};

/// Reduced Planck constant (J·s).
pub const HBAR: f64 = 1.054_571_817e-34;

/// Speed of light in vacuum (m/s).
pub const C: f64 = 299_792_458.0;

/// Boltzmann constant (J/K).
pub const K_B: f64 = 1.380_649e-23;

/// Newtonian gravitational constant (m³/(kg·s²)).
pub const G: f64 = 6.674_30e-11;

/// Riemann ζ(3), the Apéry constant.
pub const ZETA_3: f64 = 1.202_056_903_159_594_3;

/// One electronvolt (J).
pub const EV: f64 = 1.602_176_634e-19;

/// The constants bundle, for callers that want to carry them as a value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Reduced Planck constant (J·s)
    pub hbar: f64,
    /// Speed of light (m/s)
    pub c: f64,
    /// Boltzmann constant (J/K)
    pub k_b: f64,
    /// Gravitational constant (m³/(kg·s²))
    pub g: f64,
    /// Riemann ζ(3)
    pub zeta3: f64,
}

/// The compiled-in constant set.
pub const CODATA: PhysicalConstants = PhysicalConstants {
    hbar: HBAR,
    c: C,
    k_b: K_B,
    g: G,
    zeta3: ZETA_3,
};

/// Photon energy in eV to angular frequency in rad/s, ω = E/ħ.
pub fn ev_to_angular_frequency(energy_ev: f64) -> f64 {
    energy_ev * EV / HBAR
}

/// Matsubara frequency ξ_l = 2π k_B T l / ħ (rad/s).
///
/// Exactly linear in both `temperature` and `index`; returns 0 for the l = 0
/// term or at zero temperature.
pub fn matsubara_frequency(temperature: f64, index: u32) -> Result<f64> {
    if !(temperature >= 0.0) {
        return Err(Error::domain(format!(
            "temperature must be nonnegative, got {temperature} K"
        )));
    }
    // l scales the rung exactly: xi_l = l * xi_1 in floating point too.
    let base = 2.0 * std::f64::consts::PI * K_B * temperature / HBAR;
    Ok(f64::from(index) * base)
}
