//! Hypothetical Yukawa pressure between layered plates and exclusion curves
//! from theory-minus-experiment confidence bands.
//!
//! A Yukawa addition to Newtonian gravity,
//! V(r) = −(G m₁ m₂ / r)(1 + α e^{−r/λ}), integrated over two layered
//! semispaces and differentiated in the gap, gives the closed form
//!
//!   P_hyp(z) = −2πG α λ² ρ_eff⁽¹⁾(λ) ρ_eff⁽²⁾(λ) e^{−z/λ},
//!
//! where each plate's density stack folds exponentially over depth:
//! ρ_eff(λ) = Σᵢ ρᵢ (e^{−sᵢ₋₁/λ} − e^{−sᵢ/λ}). Any measured band
//! |P_th − P_exp| ≤ Δ_tot(z) then bounds |α| pointwise in z; the reported
//! curve α_max(λ) excludes everything above it. The Newtonian background
//! between closely spaced plates is negligible and never enters.

use crate::constants::{C, G, HBAR};
use crate::error::{Error, Result};
use crate::grid::Grid;

use std::f64::consts::PI;

/// One plate layer: surface coating or substrate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Layer {
    /// Thickness (m); `None` marks the semi-infinite substrate.
    pub thickness: Option<f64>,
    /// Mass density (kg/m³).
    pub density: f64,
}

impl Layer {
    pub fn coating(thickness: f64, density: f64) -> Self {
        Layer {
            thickness: Some(thickness),
            density,
        }
    }

    pub fn substrate(density: f64) -> Self {
        Layer {
            thickness: None,
            density,
        }
    }
}

/// Ordered layer stack, surface inward, ending in an infinite substrate.
#[derive(Debug, Clone, PartialEq)]
pub struct LayeredPlate {
    layers: Vec<Layer>,
}

impl LayeredPlate {
    pub fn new(layers: Vec<Layer>) -> Result<Self> {
        let mut problems = Vec::new();
        if layers.is_empty() {
            problems.push("plate needs at least one layer".into());
        }
        for (i, layer) in layers.iter().enumerate() {
            if !(layer.density > 0.0) || !layer.density.is_finite() {
                problems.push(format!(
                    "layer {i}: density {} must be positive and finite",
                    layer.density
                ));
            }
            let last = i + 1 == layers.len();
            match layer.thickness {
                None if !last => {
                    problems.push(format!("layer {i}: only the last layer may be infinite"))
                }
                Some(d) if !(d > 0.0 && d.is_finite()) => problems.push(format!(
                    "layer {i}: thickness {d} must be positive and finite"
                )),
                Some(_) if last => {
                    problems.push("the last layer must be the infinite substrate".into())
                }
                _ => {}
            }
        }
        if problems.is_empty() {
            Ok(LayeredPlate { layers })
        } else {
            Err(Error::Validation {
                context: "layered plate".into(),
                problems,
            })
        }
    }

    /// Homogeneous semispace.
    pub fn homogeneous(density: f64) -> Result<Self> {
        LayeredPlate::new(vec![Layer::substrate(density)])
    }

    /// Single coating over a substrate.
    pub fn coated(
        coating_density: f64,
        coating_thickness: f64,
        substrate_density: f64,
    ) -> Result<Self> {
        LayeredPlate::new(vec![
            Layer::coating(coating_thickness, coating_density),
            Layer::substrate(substrate_density),
        ])
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    /// Density of the homogeneous plate a Yukawa force of range λ sees:
    /// ρ_eff(λ) = Σᵢ ρᵢ (e^{−sᵢ₋₁/λ} − e^{−sᵢ/λ}) over cumulative depths sᵢ.
    /// Equals the surface density as λ → 0 and the substrate-dominated
    /// column average as λ grows.
    pub fn effective_density(&self, lambda: f64) -> Result<f64> {
        if !(lambda > 0.0) {
            return Err(Error::domain(format!(
                "lambda must be positive, got {lambda} m"
            )));
        }
        let mut depth = 0.0_f64;
        let mut weight_above = 1.0_f64; // e^{-s_{i-1}/λ}
        let mut total = 0.0_f64;
        for layer in &self.layers {
            let weight_below = match layer.thickness {
                Some(d) => {
                    depth += d;
                    (-depth / lambda).exp()
                }
                None => 0.0,
            };
            total += layer.density * (weight_above - weight_below);
            weight_above = weight_below;
        }
        Ok(total)
    }
}

/// Strength and range of the Yukawa correction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YukawaParams {
    /// Dimensionless strength α (sign permitted; constraints bound |α|).
    pub alpha: f64,
    /// Range λ (m).
    pub lambda: f64,
}

impl YukawaParams {
    pub fn new(alpha: f64, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(Error::domain(format!(
                "lambda must be positive, got {lambda} m"
            )));
        }
        if !alpha.is_finite() {
            return Err(Error::domain(format!("alpha must be finite, got {alpha}")));
        }
        Ok(YukawaParams { alpha, lambda })
    }
}

/// Yukawa-corrected potential between two point masses,
/// V(r) = −(G m₁ m₂ / r)(1 + α e^{−r/λ}).
pub fn yukawa_point_potential(m1: f64, m2: f64, r: f64, params: &YukawaParams) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::domain(format!(
            "separation must be positive, got {r} m"
        )));
    }
    Ok(-G * m1 * m2 / r * (1.0 + params.alpha * (-r / params.lambda).exp()))
}

/// Mass of the exchange boson generating a Yukawa force of range λ,
/// m = ħ/(λc).
pub fn exchange_boson_mass(lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::domain(format!(
            "lambda must be positive, got {lambda} m"
        )));
    }
    Ok(HBAR / (lambda * C))
}

/// Hypothetical Yukawa pressure between two layered plates at gap `z`:
/// P_hyp = −2πG α λ² ρ_eff⁽¹⁾ ρ_eff⁽²⁾ e^{−z/λ}.
pub fn yukawa_pressure(
    plate_1: &LayeredPlate,
    plate_2: &LayeredPlate,
    z: f64,
    params: &YukawaParams,
) -> Result<f64> {
    if !(z > 0.0) {
        return Err(Error::domain(format!(
            "separation must be positive, got {z} m"
        )));
    }
    let lambda = params.lambda;
    let rho1 = plate_1.effective_density(lambda)?;
    let rho2 = plate_2.effective_density(lambda)?;
    Ok(-2.0 * PI * G * params.alpha * lambda * lambda * rho1 * rho2 * (-z / lambda).exp())
}

/// Per-separation half-widths Δ_tot(z) of the 95%-confidence interval of
/// P_th − P_exp.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentBand {
    rows: Vec<(f64, f64)>,
}

impl ExperimentBand {
    /// Rows of (separation m, half-width Pa), strictly increasing in z.
    pub fn new(rows: Vec<(f64, f64)>) -> Result<Self> {
        let mut problems = Vec::new();
        if rows.is_empty() {
            problems.push("band must be nonempty".into());
        }
        for (i, &(z, delta)) in rows.iter().enumerate() {
            if !(z > 0.0) || !z.is_finite() {
                problems.push(format!(
                    "row {i}: separation {z} must be positive and finite"
                ));
            }
            if !(delta > 0.0) || !delta.is_finite() {
                problems.push(format!(
                    "row {i}: half-width {delta} must be positive and finite"
                ));
            }
            if i > 0 && !(rows[i - 1].0 < z) {
                problems.push(format!(
                    "row {i}: separation {z} does not increase past {}",
                    rows[i - 1].0
                ));
            }
        }
        if problems.is_empty() {
            Ok(ExperimentBand { rows })
        } else {
            Err(Error::Validation {
                context: "experiment band".into(),
                problems,
            })
        }
    }

    /// CSV interchange format: `#` comments, header `z_nm,delta_mPa`, then
    /// numeric rows (separation in nm, half-width in mPa).
    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut problems = Vec::new();
        let mut rows = Vec::new();
        let mut saw_header = false;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if !saw_header {
                if fields.len() != 2
                    || !fields[0].eq_ignore_ascii_case("z_nm")
                    || !fields[1].eq_ignore_ascii_case("delta_mPa")
                {
                    problems.push(format!(
                        "line {}: header must be 'z_nm,delta_mPa', got '{line}'",
                        lineno + 1
                    ));
                    break;
                }
                saw_header = true;
                continue;
            }
            if fields.len() != 2 {
                problems.push(format!(
                    "line {}: expected two comma-separated values, got {}",
                    lineno + 1,
                    fields.len()
                ));
                continue;
            }
            match (fields[0].parse::<f64>(), fields[1].parse::<f64>()) {
                (Ok(z_nm), Ok(delta_mpa)) => rows.push((z_nm * 1e-9, delta_mpa * 1e-3)),
                (Err(_), _) => problems.push(format!(
                    "line {}: unparseable separation '{}'",
                    lineno + 1,
                    fields[0]
                )),
                (_, Err(_)) => problems.push(format!(
                    "line {}: unparseable half-width '{}'",
                    lineno + 1,
                    fields[1]
                )),
            }
        }
        if !saw_header && problems.is_empty() {
            problems.push("no header row found".into());
        }
        if !problems.is_empty() {
            return Err(Error::Validation {
                context: "experiment band CSV".into(),
                problems,
            });
        }
        ExperimentBand::new(rows)
    }

    pub fn rows(&self) -> &[(f64, f64)] {
        &self.rows
    }
}

/// One point of an exclusion curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintPoint {
    /// Yukawa range (m).
    pub lambda: f64,
    /// Largest |α| compatible with the band; everything above is excluded.
    pub alpha_max: f64,
    /// Separation attaining the minimum.
    pub z_star: f64,
}

/// Exclusion curve α_max(λ); the region above it is experimentally
/// prohibited.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintCurve {
    pub points: Vec<ConstraintPoint>,
}

/// Pointwise constraint |P_hyp(z)| ≤ Δ_tot(z):
/// α_max(λ) = min_z Δ_tot(z) / (2πGλ² ρ_eff⁽¹⁾ ρ_eff⁽²⁾ e^{−z/λ}),
/// one-sided, no statistical combination across separations.
pub fn constrain(
    band: &ExperimentBand,
    plate_1: &LayeredPlate,
    plate_2: &LayeredPlate,
    lambda_grid: &Grid,
) -> Result<ConstraintCurve> {
    let mut points = Vec::with_capacity(lambda_grid.len());
    for lambda in lambda_grid.iter() {
        let rho1 = plate_1.effective_density(lambda)?;
        let rho2 = plate_2.effective_density(lambda)?;
        let denom = 2.0 * PI * G * lambda * lambda * rho1 * rho2;
        if denom == 0.0 {
            return Err(Error::Degenerate(format!(
                "effective densities vanish at lambda = {lambda:e} m"
            )));
        }
        let mut best = f64::INFINITY;
        let mut z_star = band.rows[0].0;
        for &(z, delta) in &band.rows {
            let alpha = delta / (denom * (-z / lambda).exp());
            if alpha < best {
                best = alpha;
                z_star = z;
            }
        }
        points.push(ConstraintPoint {
            lambda,
            alpha_max: best,
            z_star,
        });
    }
    Ok(ConstraintCurve { points })
}
