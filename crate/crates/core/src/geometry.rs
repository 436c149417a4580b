//! Closed-form ideal-metal results, sphere–plate conversion through the
//! proximity force approximation, stochastic roughness averaging, and the
//! Casimir-driven oscillator.
//!
//! PFA converts free energy per unit area into a sphere–plate force,
//! F_sp(z) = 2πR·E_pp(z), carrying the fractional error bound z/R. The
//! ideal-metal specialization reproduces F = −π³ħcR/(360 z³) algebraically.

use crate::constants::{C, HBAR};
use crate::error::{Error, Result};
use crate::grid::{Grid, GridScale};
use crate::lifshitz::{Engine, PlateConfig, ThermalState};
use crate::quad;

use std::f64::consts::PI;

/// Ideal-metal parallel-plate pressure, P(z) = −π²ħc/(240 z⁴).
pub fn ideal_pressure(separation: f64) -> Result<f64> {
    if !(separation > 0.0) {
        return Err(Error::domain(format!(
            "separation must be positive, got {separation} m"
        )));
    }
    Ok(-PI * PI * HBAR * C / (240.0 * separation.powi(4)))
}

/// Sphere above a plate at closest approach `separation`.
#[derive(Debug, Clone, Copy)]
pub struct SphereConfig {
    /// Sphere radius (m).
    pub radius: f64,
    /// Closest-approach separation (m).
    pub separation: f64,
}

impl SphereConfig {
    /// PFA carries a fractional error of order z/R, so z/R > 0.3 is rejected
    /// outright; between 0.1 and 0.3 the result is usable but strained
    /// (see [`SphereConfig::within_recommended_validity`]).
    pub fn new(radius: f64, separation: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::domain(format!(
                "radius must be positive, got {radius} m"
            )));
        }
        if !(separation > 0.0) {
            return Err(Error::domain(format!(
                "separation must be positive, got {separation} m"
            )));
        }
        let aspect = separation / radius;
        if aspect > 0.3 {
            return Err(Error::Geometry(format!(
                "z/R = {aspect:.3} exceeds 0.3; the proximity force approximation does not apply"
            )));
        }
        Ok(SphereConfig { radius, separation })
    }

    /// The PFA expansion parameter z/R.
    pub fn aspect(&self) -> f64 {
        self.separation / self.radius
    }

    /// True when z/R < 0.1, the comfortable PFA regime.
    pub fn within_recommended_validity(&self) -> bool {
        self.aspect() < 0.1
    }
}

/// Ideal-metal sphere–plate force at zero temperature,
/// F(z) = −π³ħcR/(360 z³).
pub fn ideal_sphere_force(sphere: &SphereConfig) -> Result<f64> {
    Ok(-PI.powi(3) * HBAR * C * sphere.radius / (360.0 * sphere.separation.powi(3)))
}

/// A PFA force together with its fractional error bound z/R.
#[derive(Debug, Clone, Copy)]
pub struct PfaForce {
    /// Sphere–plate force (N), negative for attraction.
    pub force: f64,
    /// Fractional bound on the PFA error, z/R.
    pub error_bound: f64,
}

/// Sphere–plate force via PFA, F_sp = 2πR·E_pp(z). The separation comes from
/// `sphere`; `plates.separation` is ignored.
pub fn pfa_sphere_force(
    engine: &Engine,
    sphere: &SphereConfig,
    plates: &PlateConfig,
    thermal: &ThermalState,
) -> Result<PfaForce> {
    let cfg = plates.at_separation(sphere.separation)?;
    let energy = engine.free_energy(&cfg, thermal)?.value;
    Ok(PfaForce {
        force: 2.0 * PI * sphere.radius * energy,
        error_bound: sphere.aspect(),
    })
}

/// The micromechanical-oscillator observable: plate pressure recovered from
/// the gradient of the sphere–plate force, P(z) = −F_sp′(z)/(2πR)
/// (Richardson-extrapolated central differences). Agrees with the direct
/// plate pressure within the PFA bound plus derivative noise.
pub fn pressure_from_gradient(
    engine: &Engine,
    sphere: &SphereConfig,
    plates: &PlateConfig,
    thermal: &ThermalState,
) -> Result<f64> {
    let z = sphere.separation;
    let h = 5e-4 * z;
    let energy = |zz: f64| -> Result<f64> {
        Ok(engine
            .free_energy(&plates.at_separation(zz)?, thermal)?
            .value)
    };
    let d1 = (energy(z + h)? - energy(z - h)?) / (2.0 * h);
    let d2 = (energy(z + 0.5 * h)? - energy(z - 0.5 * h)?) / h;
    // F_sp' / (2πR) = E_pp'; the pressure is its negative.
    Ok(-(4.0 * d2 - d1) / 3.0)
}

/// Discrete zero-mean distribution of surface height offsets.
#[derive(Debug, Clone)]
pub struct RoughnessProfile {
    offsets: Vec<f64>,
    weights: Vec<f64>,
}

impl RoughnessProfile {
    pub fn new(offsets: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        let mut problems = Vec::new();
        if offsets.len() != weights.len() {
            problems.push(format!(
                "{} offsets vs {} weights",
                offsets.len(),
                weights.len()
            ));
        }
        if offsets.is_empty() {
            problems.push("profile must be nonempty".into());
        }
        for (i, &w) in weights.iter().enumerate() {
            if !(w >= 0.0) || !w.is_finite() {
                problems.push(format!(
                    "row {i}: weight {w} must be nonnegative and finite"
                ));
            }
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            problems.push(format!("weights sum to {total}, expected 1 within 1e-12"));
        }
        let mean: f64 = offsets.iter().zip(&weights).map(|(h, w)| h * w).sum();
        let scale = offsets.iter().fold(0.0_f64, |m, h| m.max(h.abs()));
        if scale > 0.0 && mean.abs() > 1e-12 * scale {
            problems.push(format!(
                "profile mean {mean:e} m is not zero within 1e-12 of the largest offset"
            ));
        }
        if problems.is_empty() {
            Ok(RoughnessProfile { offsets, weights })
        } else {
            Err(Error::Validation {
                context: "roughness profile".into(),
                problems,
            })
        }
    }

    /// Symmetric two-point profile ±`amplitude` with equal weights.
    pub fn symmetric(amplitude: f64) -> Result<Self> {
        RoughnessProfile::new(vec![-amplitude, amplitude], vec![0.5, 0.5])
    }

    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Roughness-averaged pressure, P_rough(z) = Σᵢ wᵢ P(z + hᵢ).
/// Convexity of |P| in z makes any symmetric zero-mean profile strengthen
/// the attraction.
pub fn rough_pressure(
    engine: &Engine,
    plates: &PlateConfig,
    thermal: &ThermalState,
    profile: &RoughnessProfile,
) -> Result<f64> {
    let z = plates.separation;
    let min_offset = profile.offsets.iter().fold(f64::INFINITY, |m, h| m.min(*h));
    if !(z + min_offset > 0.0) {
        return Err(Error::domain(format!(
            "offset {min_offset} m closes the {z} m gap"
        )));
    }
    let mut total = 0.0;
    for (&h, &w) in profile.offsets.iter().zip(&profile.weights) {
        if w == 0.0 {
            continue;
        }
        total += w * engine.pressure(&plates.at_separation(z + h)?, thermal)?;
    }
    Ok(total)
}

/// Sphere on a spring facing a plate: U(Δz) = ½K·Δz² + E_sp(z0 − Δz),
/// with positive shifts moving the surfaces together.
#[derive(Debug, Clone)]
pub struct OscillatorConfig {
    /// Hooke constant K (N/m).
    pub stiffness: f64,
    /// Unperturbed separation z0 (m).
    pub rest_separation: f64,
    /// Sphere radius (m).
    pub sphere_radius: f64,
    /// Effective mass of the mode (kg).
    pub effective_mass: f64,
    /// Materials and zero-frequency prescription; the config's own
    /// separation is ignored.
    pub plates: PlateConfig,
    pub thermal: ThermalState,
}

impl OscillatorConfig {
    fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("stiffness", self.stiffness),
            ("rest_separation", self.rest_separation),
            ("sphere_radius", self.sphere_radius),
            ("effective_mass", self.effective_mass),
        ] {
            if !(v > 0.0) {
                return Err(Error::domain(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquilibriumKind {
    Minimum,
    Maximum,
    /// Curvature below 1e-3 of the local curvature scale; reported
    /// separately near bistability onset.
    Degenerate,
    /// Sampled basin truncated by the contact-side grid edge (its true
    /// minimum lies beyond the grid, toward contact).
    BoundaryBasin,
}

#[derive(Debug, Clone, Copy)]
pub struct Equilibrium {
    /// Plate shift Δz (m).
    pub shift: f64,
    /// Sphere–plate separation z0 − Δz (m).
    pub separation: f64,
    /// U(Δz) (J).
    pub potential: f64,
    /// U″(Δz) (J/m²); `None` for boundary basins.
    pub curvature: Option<f64>,
    pub kind: EquilibriumKind,
}

#[derive(Debug, Clone)]
pub struct OscillatorAnalysis {
    /// (Δz, U) samples in ascending shift order.
    pub landscape: Vec<(f64, f64)>,
    /// Stationary points plus boundary basins, ascending shift.
    pub equilibria: Vec<Equilibrium>,
    /// √(U″/m_eff) at the innermost stationary minimum, when one exists with
    /// positive curvature.
    pub local_minimum_frequency: Option<f64>,
    /// Two or more minima (counting boundary basins) exist.
    pub bistable: bool,
}

/// Potential landscape of the Casimir oscillator over a linear shift grid.
///
/// The Casimir side is the PFA potential E_sp(z) = 2πR ∫_z^∞ E_pp(z′) dz′,
/// accumulated over the grid from the far end so each free-energy evaluation
/// is shared between neighbouring samples.
pub fn oscillator_analysis(
    engine: &Engine,
    oscillator: &OscillatorConfig,
    shift_grid: &Grid,
) -> Result<OscillatorAnalysis> {
    oscillator.validate()?;
    if shift_grid.scale() != GridScale::Linear {
        return Err(Error::domain(
            "oscillator analysis needs a linear shift grid (uniform stencils)",
        ));
    }
    if shift_grid.len() < 5 {
        return Err(Error::domain("oscillator grid needs at least 5 points"));
    }
    let z0 = oscillator.rest_separation;
    if !(shift_grid.last() < z0) {
        return Err(Error::domain(format!(
            "largest shift {:e} m does not keep the {z0:e} m gap open",
            shift_grid.last()
        )));
    }

    let shifts: Vec<f64> = shift_grid.points().to_vec();
    let n = shifts.len();
    let h = shifts[1] - shifts[0];
    let rel = engine.tolerances.rel_quad.max(1e-11);

    let plate_energy = |z: f64| -> Result<f64> {
        Ok(engine
            .free_energy(&oscillator.plates.at_separation(z)?, &oscillator.thermal)?
            .value)
    };

    // Separations in ascending order are the shifts reversed.
    let separations: Vec<f64> = shifts.iter().rev().map(|dz| z0 - dz).collect();

    // Tail: ∫_{z_max}^∞ E_pp dz′ with z′ = z_max/u.
    let z_max = separations[n - 1];
    let tail_failure: std::cell::RefCell<Option<Error>> = std::cell::RefCell::new(None);
    let tail_integrand = |u: f64| -> f64 {
        match plate_energy(z_max / u) {
            Ok(v) => v / (u * u),
            Err(e) => {
                let mut slot = tail_failure.borrow_mut();
                if slot.is_none() {
                    *slot = Some(e);
                }
                0.0
            }
        }
    };
    let tail =
        z_max * quad::adaptive(&tail_integrand, 0.0, 1.0, rel, 0.0, "pfa potential tail")?.value;
    if let Some(e) = tail_failure.into_inner() {
        return Err(e);
    }

    // March inward, adding ∫_{z_i}^{z_{i+1}} E_pp over each gap.
    let mut cumulative = vec![0.0_f64; n];
    cumulative[n - 1] = tail;
    for i in (0..n - 1).rev() {
        let seg_failure: std::cell::RefCell<Option<Error>> = std::cell::RefCell::new(None);
        let integrand = |z: f64| -> f64 {
            match plate_energy(z) {
                Ok(v) => v,
                Err(e) => {
                    let mut slot = seg_failure.borrow_mut();
                    if slot.is_none() {
                        *slot = Some(e);
                    }
                    0.0
                }
            }
        };
        let seg = quad::adaptive(
            &integrand,
            separations[i],
            separations[i + 1],
            rel,
            rel * cumulative[i + 1].abs(),
            "pfa potential segment",
        )?;
        if let Some(e) = seg_failure.into_inner() {
            return Err(e);
        }
        cumulative[i] = cumulative[i + 1] + seg.value;
    }

    let two_pi_r = 2.0 * PI * oscillator.sphere_radius;
    let landscape: Vec<(f64, f64)> = shifts
        .iter()
        .enumerate()
        .map(|(j, &dz)| {
            // separations are reversed relative to shifts.
            let e_sp = two_pi_r * cumulative[n - 1 - j];
            (dz, 0.5 * oscillator.stiffness * dz * dz + e_sp)
        })
        .collect();

    let u: Vec<f64> = landscape.iter().map(|&(_, v)| v).collect();
    let mut equilibria = Vec::new();

    // Hooke-side edge: when the potential rises away from the smallest
    // shift, the local minimum sits at (or just below) the first sample.
    // Reported with a one-sided curvature so the small-oscillation frequency
    // stays defined for stiff springs whose minimum hugs zero shift.
    if u[0] < u[1] {
        let c = (u[0] - 2.0 * u[1] + u[2]) / (h * h);
        equilibria.push(Equilibrium {
            shift: shifts[0],
            separation: z0 - shifts[0],
            potential: u[0],
            curvature: Some(c),
            kind: if c > 0.0 {
                EquilibriumKind::Minimum
            } else {
                EquilibriumKind::Degenerate
            },
        });
    }

    for i in 1..n - 1 {
        let before = u[i] - u[i - 1];
        let after = u[i + 1] - u[i];
        if before == 0.0 && after == 0.0 {
            continue; // flat patch, no isolated stationary point
        }
        let is_min = before < 0.0 && after >= 0.0;
        let is_max = before > 0.0 && after <= 0.0;
        if !(is_min || is_max) {
            continue;
        }
        let c_h = (u[i - 1] - 2.0 * u[i] + u[i + 1]) / (h * h);
        let (curvature, scale) = if i >= 2 && i + 2 < n {
            let c_2h = (u[i - 2] - 2.0 * u[i] + u[i + 2]) / (4.0 * h * h);
            // 5-point stencil = Richardson pair of 3-point stencils.
            ((4.0 * c_h - c_2h) / 3.0, c_h.abs().max(c_2h.abs()))
        } else {
            (c_h, c_h.abs())
        };
        let kind = if curvature.abs() < 1e-3 * scale {
            EquilibriumKind::Degenerate
        } else if is_min {
            EquilibriumKind::Minimum
        } else {
            EquilibriumKind::Maximum
        };
        equilibria.push(Equilibrium {
            shift: shifts[i],
            separation: z0 - shifts[i],
            potential: u[i],
            curvature: Some(curvature),
            kind,
        });
    }

    // Basin truncated by the contact-side edge: the potential still falls
    // at the last sample, so a second (off-grid) minimum lies beyond it.
    if u[n - 1] < u[n - 2] {
        equilibria.push(Equilibrium {
            shift: shifts[n - 1],
            separation: z0 - shifts[n - 1],
            potential: u[n - 1],
            curvature: None,
            kind: EquilibriumKind::BoundaryBasin,
        });
    }

    let minima = equilibria
        .iter()
        .filter(|e| {
            matches!(
                e.kind,
                EquilibriumKind::Minimum | EquilibriumKind::BoundaryBasin
            )
        })
        .count();
    let local_minimum_frequency = equilibria
        .iter()
        .find(|e| e.kind == EquilibriumKind::Minimum)
        .and_then(|e| e.curvature)
        .filter(|c| *c > 0.0)
        .map(|c| (c / oscillator.effective_mass).sqrt());

    Ok(OscillatorAnalysis {
        landscape,
        equilibria,
        local_minimum_frequency,
        bistable: minima >= 2,
    })
}
