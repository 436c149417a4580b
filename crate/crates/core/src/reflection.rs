//! Reflection amplitudes on the imaginary frequency axis.
//!
//! Everything enters the Lifshitz kernel squared, so both amplitudes are
//! stored as magnitudes with the ideal-metal limit fixed at +1 for both
//! polarizations. The contested ξ = 0 coefficients are never produced by
//! evaluating ε(iξ) at small ξ; they are dispatched through an explicit
//! [`ZeroFreqPrescription`], which is where the thermal-Casimir puzzle lives:
//!
//! - Schwinger (ε → ∞ first) and skin-effect impedance: r_∥ = r_⊥ = 1
//! - Drude: r_∥ = 1, r_⊥ = 0
//! - plasma: r_∥ = 1, r_⊥ = (√(c²k²+ω_p²) − ck)/(√(c²k²+ω_p²) + ck)
//! - infrared-optics impedance: r_∥ = 1, r_⊥ = (ω_p − ck)/(ω_p + ck)
//!
//! Extension-free tabulated materials are dielectrics with a finite static
//! permittivity; they take the static limit r_∥ = (ε₀−1)/(ε₀+1), r_⊥ = 0
//! whatever prescription is configured for the metals.

use crate::constants::C;
use crate::error::{Error, Result};
use crate::material::{LowFreqExtension, MaterialModel};

/// The two polarization amplitudes (TM = parallel, TE = perpendicular).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionPair {
    /// Transverse magnetic (E parallel to the plane of incidence).
    pub r_par: f64,
    /// Transverse electric.
    pub r_perp: f64,
}

/// Kinematic point: imaginary frequency, transverse wavenumber, and the
/// vacuum decay wavenumber q = √(k² + ξ²/c²).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveContext {
    pub xi: f64,
    pub k: f64,
    pub q: f64,
}

impl WaveContext {
    pub fn new(xi: f64, k: f64) -> Result<Self> {
        if !(xi >= 0.0) {
            return Err(Error::domain(format!("xi must be nonnegative, got {xi}")));
        }
        if !(k > 0.0) {
            return Err(Error::domain(format!(
                "transverse wavenumber must be positive, got {k}"
            )));
        }
        Ok(WaveContext {
            xi,
            k,
            q: k.hypot(xi / C),
        })
    }
}

/// Treatment of the l = 0 Matsubara term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroFreqPrescription {
    /// Take ε → ∞ before the Matsubara sum: ideal-metal coefficients.
    SchwingerIdeal,
    /// Drude zero-frequency transversality: TE mode does not reflect.
    Drude,
    /// Plasma-model TE coefficient with its ω_p-dependent k profile.
    Plasma,
    /// Leontovich impedance, infrared-optics region.
    ImpedanceIr,
    /// Leontovich impedance, normal/anomalous skin-effect regions (equal to
    /// the ideal-metal values).
    ImpedanceSkin,
}

impl ZeroFreqPrescription {
    pub fn name(&self) -> &'static str {
        match self {
            ZeroFreqPrescription::SchwingerIdeal => "schwinger",
            ZeroFreqPrescription::Drude => "drude",
            ZeroFreqPrescription::Plasma => "plasma",
            ZeroFreqPrescription::ImpedanceIr => "impedance-ir",
            ZeroFreqPrescription::ImpedanceSkin => "impedance-skin",
        }
    }
}

/// Fresnel coefficients at ξ > 0 for permittivity-based models, magnitude
/// convention. With ε = ε(iξ) and k₁ = √(k² + εξ²/c²):
/// r_∥ = (εq − k₁)/(εq + k₁), r_⊥ = (k₁ − q)/(k₁ + q).
pub fn fresnel(material: &MaterialModel, ctx: &WaveContext) -> Result<ReflectionPair> {
    if !(ctx.xi > 0.0) {
        return Err(Error::domain(
            "fresnel requires xi > 0; the xi = 0 term must go through zero_freq_limit",
        ));
    }
    match material {
        MaterialModel::IdealMetal => Ok(ReflectionPair {
            r_par: 1.0,
            r_perp: 1.0,
        }),
        MaterialModel::Impedance { .. } => Err(Error::Unsupported {
            operation: "fresnel",
            kind: material.kind_name(),
        }),
        _ => {
            let eps = material.eps_imag_axis(ctx.xi)?;
            Ok(fresnel_from_eps(eps, ctx))
        }
    }
}

pub(crate) fn fresnel_from_eps(eps: f64, ctx: &WaveContext) -> ReflectionPair {
    if eps == 1.0 {
        // No interface; also keeps q and k1 from differing by rounding.
        return ReflectionPair {
            r_par: 0.0,
            r_perp: 0.0,
        };
    }
    let xi_c = ctx.xi / C;
    // Positive real branch, guaranteed real on the imaginary axis for ε >= 1.
    let k1 = (ctx.k * ctx.k + eps * xi_c * xi_c).sqrt();
    ReflectionPair {
        r_par: (eps * ctx.q - k1) / (eps * ctx.q + k1),
        r_perp: (k1 - ctx.q) / (k1 + ctx.q),
    }
}

/// Leontovich-boundary reflection at ξ > 0:
/// r_∥ = (cq − ξZ)/(cq + ξZ), r_⊥ = |ξ − cqZ|/(ξ + cqZ) with Z = Z(iξ).
/// Both reduce to 1 as Z → 0 and to the infrared-optics zero-frequency pair
/// as ξ → 0.
pub fn impedance_reflection(material: &MaterialModel, ctx: &WaveContext) -> Result<ReflectionPair> {
    if !(ctx.xi > 0.0) {
        return Err(Error::domain(
            "impedance_reflection requires xi > 0; use zero_freq_limit at xi = 0",
        ));
    }
    let z = material.impedance_imag_axis(ctx.xi)?;
    Ok(impedance_from_z(z, ctx))
}

pub(crate) fn impedance_from_z(z: f64, ctx: &WaveContext) -> ReflectionPair {
    let cq = C * ctx.q;
    ReflectionPair {
        r_par: (cq - ctx.xi * z) / (cq + ctx.xi * z),
        r_perp: (ctx.xi - cq * z).abs() / (ctx.xi + cq * z),
    }
}

/// Zero-frequency reflection pair for one plate under a prescription.
pub fn zero_freq_limit(
    material: &MaterialModel,
    k: f64,
    prescription: ZeroFreqPrescription,
) -> Result<ReflectionPair> {
    if !(k > 0.0) {
        return Err(Error::domain(format!(
            "transverse wavenumber must be positive, got {k}"
        )));
    }
    Ok(ZeroFreqCoeffs::for_plate(material, prescription)?.at(k))
}

/// Resolved zero-frequency behaviour of one plate; closed over k.
#[derive(Debug, Clone, Copy)]
pub(crate) enum ZeroFreqCoeffs {
    Constant { r_par: f64, r_perp: f64 },
    PlasmaTe { omega_p: f64 },
    ImpedanceIrTe { omega_p: f64 },
}

impl ZeroFreqCoeffs {
    pub(crate) fn for_plate(
        material: &MaterialModel,
        prescription: ZeroFreqPrescription,
    ) -> Result<Self> {
        material.validate()?;

        // Dielectric route: a table with no metallic extension has a finite
        // static permittivity and an unambiguous limit.
        if let MaterialModel::Tabulated {
            extension: LowFreqExtension::None,
            ..
        } = material
        {
            let eps0 = material.static_eps()?;
            return Ok(ZeroFreqCoeffs::Constant {
                r_par: (eps0 - 1.0) / (eps0 + 1.0),
                r_perp: 0.0,
            });
        }

        let mismatch = |p: ZeroFreqPrescription| {
            Error::config(format!(
                "zero-frequency prescription '{}' is incompatible with material kind '{}'",
                p.name(),
                material.kind_name()
            ))
        };
        let ideal = matches!(material, MaterialModel::IdealMetal);
        match prescription {
            ZeroFreqPrescription::SchwingerIdeal => Ok(ZeroFreqCoeffs::Constant {
                r_par: 1.0,
                r_perp: 1.0,
            }),
            ZeroFreqPrescription::Drude => {
                if ideal {
                    return Err(mismatch(prescription));
                }
                Ok(ZeroFreqCoeffs::Constant {
                    r_par: 1.0,
                    r_perp: 0.0,
                })
            }
            ZeroFreqPrescription::Plasma => {
                let omega_p = material
                    .plasma_frequency()
                    .ok_or_else(|| mismatch(prescription))?;
                Ok(ZeroFreqCoeffs::PlasmaTe { omega_p })
            }
            ZeroFreqPrescription::ImpedanceIr => {
                let omega_p = material
                    .plasma_frequency()
                    .ok_or_else(|| mismatch(prescription))?;
                Ok(ZeroFreqCoeffs::ImpedanceIrTe { omega_p })
            }
            ZeroFreqPrescription::ImpedanceSkin => {
                if ideal {
                    return Err(mismatch(prescription));
                }
                Ok(ZeroFreqCoeffs::Constant {
                    r_par: 1.0,
                    r_perp: 1.0,
                })
            }
        }
    }

    pub(crate) fn at(&self, k: f64) -> ReflectionPair {
        match *self {
            ZeroFreqCoeffs::Constant { r_par, r_perp } => ReflectionPair { r_par, r_perp },
            ZeroFreqCoeffs::PlasmaTe { omega_p } => {
                let ck = C * k;
                let s = ck.hypot(omega_p);
                ReflectionPair {
                    r_par: 1.0,
                    r_perp: (s - ck) / (s + ck),
                }
            }
            ZeroFreqCoeffs::ImpedanceIrTe { omega_p } => {
                let ck = C * k;
                ReflectionPair {
                    r_par: 1.0,
                    // Magnitude convention; the raw form goes negative for ck > ω_p.
                    r_perp: (omega_p - ck).abs() / (omega_p + ck),
                }
            }
        }
    }

    /// The (r_∥, r_⊥) pair when it does not depend on k.
    pub(crate) fn constant(&self) -> Option<(f64, f64)> {
        match *self {
            ZeroFreqCoeffs::Constant { r_par, r_perp } => Some((r_par, r_perp)),
            _ => None,
        }
    }
}

/// Per-(material, ξ) snapshot so the engine evaluates ε(iξ) or Z(iξ) once per
/// Matsubara term instead of once per quadrature node.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Surface {
    Ideal,
    Eps(f64),
    Imp(f64),
}

impl Surface {
    pub(crate) fn at(material: &MaterialModel, xi: f64) -> Result<Self> {
        Ok(match material {
            MaterialModel::IdealMetal => Surface::Ideal,
            MaterialModel::Impedance { .. } => Surface::Imp(material.impedance_imag_axis(xi)?),
            _ => Surface::Eps(material.eps_imag_axis(xi)?),
        })
    }

    pub(crate) fn coefficients(&self, ctx: &WaveContext) -> ReflectionPair {
        match *self {
            Surface::Ideal => ReflectionPair {
                r_par: 1.0,
                r_perp: 1.0,
            },
            Surface::Eps(eps) => fresnel_from_eps(eps, ctx),
            Surface::Imp(z) => impedance_from_z(z, ctx),
        }
    }
}
