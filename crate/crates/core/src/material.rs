//! Dielectric response ε(iξ) and surface impedance of the plate materials.
//!
//! Models supported on the imaginary frequency axis:
//!
//! - plasma: ε(iξ) = 1 + ω_p²/ξ²
//! - Drude: ε(iξ) = 1 + ω_p²/(ξ(ξ+γ))
//! - Leontovich impedance (infrared-optics branch): Z(iξ) = ξ/√(ξ²+ω_p²)
//! - tabulated Im ε(ω) carried to the imaginary axis by the
//!   Kramers–Kronig transform ε(iξ) = 1 + (2/π)∫₀^∞ ω·Imε(ω)/(ω²+ξ²) dω,
//!   with an analytic low-frequency extension below the first table point
//!   and an Imε ∝ ω⁻³ tail above the last.
//!
//! Only nonmagnetic, isotropic media; μ = 1 throughout.

use crate::constants::ev_to_angular_frequency;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::quad;

/// Gold Drude parameters shipped as a convenience preset (standard literature
/// values, configuration defaults rather than asserted truths).
pub const GOLD_PLASMA_FREQUENCY_EV: f64 = 9.0;
pub const GOLD_RELAXATION_FREQUENCY_EV: f64 = 0.035;

/// Internal relative tolerance of the Kramers–Kronig quadrature.
const KK_REL_TOL: f64 = 1e-10;

/// Analytic continuation of a table below its first frequency point.
#[derive(Debug, Clone, PartialEq)]
pub enum LowFreqExtension {
    /// No extension: the material is treated as transparent below the table
    /// (dielectric-like, finite static permittivity).
    None,
    /// Drude continuation Imε(ω) = ω_p²γ/(ω(ω²+γ²)) on (0, ω_first).
    Drude { omega_p: f64, gamma: f64 },
    /// Plasma continuation: the dissipationless free-electron gas puts all
    /// low-frequency spectral weight in a zero-frequency delta, which
    /// contributes exactly ω_p²/ξ² to ε(iξ).
    Plasma { omega_p: f64 },
}

impl LowFreqExtension {
    fn validate(&self) -> Result<()> {
        match self {
            LowFreqExtension::None => Ok(()),
            LowFreqExtension::Drude { omega_p, gamma } => {
                if !(*omega_p > 0.0) {
                    return Err(Error::domain("extension omega_p must be positive"));
                }
                if !(*gamma >= 0.0) {
                    return Err(Error::domain("extension gamma must be nonnegative"));
                }
                Ok(())
            }
            LowFreqExtension::Plasma { omega_p } => {
                if !(*omega_p > 0.0) {
                    return Err(Error::domain("extension omega_p must be positive"));
                }
                Ok(())
            }
        }
    }

    pub fn plasma_frequency(&self) -> Option<f64> {
        match self {
            LowFreqExtension::None => None,
            LowFreqExtension::Drude { omega_p, .. } | LowFreqExtension::Plasma { omega_p } => {
                Some(*omega_p)
            }
        }
    }
}

/// Tabulated imaginary part of the permittivity over angular frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct OpticalTable {
    omega: Vec<f64>,
    im_eps: Vec<f64>,
}

impl OpticalTable {
    /// Validates and wraps raw columns. Frequencies must be strictly
    /// increasing and positive; Imε must be nonnegative everywhere
    /// (passivity); at least 8 points.
    pub fn new(omega: Vec<f64>, im_eps: Vec<f64>) -> Result<Self> {
        let mut problems = Vec::new();
        if omega.len() != im_eps.len() {
            problems.push(format!(
                "column lengths differ: {} frequencies vs {} Im eps values",
                omega.len(),
                im_eps.len()
            ));
        }
        if omega.len() < 8 {
            problems.push(format!("need at least 8 points, got {}", omega.len()));
        }
        for (i, &w) in omega.iter().enumerate() {
            if !(w > 0.0) || !w.is_finite() {
                problems.push(format!("row {i}: frequency {w} is not positive and finite"));
            }
            if i > 0 && !(omega[i - 1] < w) {
                problems.push(format!(
                    "row {i}: frequency {w} does not increase past {}",
                    omega[i - 1]
                ));
            }
        }
        for (i, &g) in im_eps.iter().enumerate() {
            if !(g >= 0.0) || !g.is_finite() {
                problems.push(format!(
                    "row {i}: Im eps {g} violates passivity (must be >= 0)"
                ));
            }
        }
        if problems.is_empty() {
            Ok(OpticalTable { omega, im_eps })
        } else {
            Err(Error::Validation {
                context: "optical table".into(),
                problems,
            })
        }
    }

    /// Parses the two-column CSV interchange format:
    /// `#`-prefixed comment lines, then a header naming the frequency unit
    /// (`omega_rad_s` or `energy_ev`) and `im_eps`, then numeric rows in
    /// ascending frequency order.
    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut problems = Vec::new();
        let mut omega = Vec::new();
        let mut im_eps = Vec::new();
        let mut in_ev = None;

        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if in_ev.is_none() {
                // Header row.
                if fields.len() != 2 {
                    problems.push(format!(
                        "line {}: header must have two columns, got {}",
                        lineno + 1,
                        fields.len()
                    ));
                    break;
                }
                match fields[0].to_ascii_lowercase().as_str() {
                    "omega_rad_s" => in_ev = Some(false),
                    "energy_ev" => in_ev = Some(true),
                    other => {
                        problems.push(format!(
                            "line {}: frequency column must be 'omega_rad_s' or 'energy_ev', got '{other}'",
                            lineno + 1
                        ));
                        break;
                    }
                }
                if !fields[1].eq_ignore_ascii_case("im_eps") {
                    problems.push(format!(
                        "line {}: second column must be 'im_eps', got '{}'",
                        lineno + 1,
                        fields[1]
                    ));
                    break;
                }
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
            let w: f64 = match fields[0].parse() {
                Ok(v) => v,
                Err(_) => {
                    problems.push(format!(
                        "line {}: unparseable frequency '{}'",
                        lineno + 1,
                        fields[0]
                    ));
                    continue;
                }
            };
            let g: f64 = match fields[1].parse() {
                Ok(v) => v,
                Err(_) => {
                    problems.push(format!(
                        "line {}: unparseable Im eps '{}'",
                        lineno + 1,
                        fields[1]
                    ));
                    continue;
                }
            };
            omega.push(if in_ev == Some(true) {
                ev_to_angular_frequency(w)
            } else {
                w
            });
            im_eps.push(g);
        }

        if in_ev.is_none() && problems.is_empty() {
            problems.push("no header row found".into());
        }
        if !problems.is_empty() {
            return Err(Error::Validation {
                context: "optical table CSV".into(),
                problems,
            });
        }
        OpticalTable::new(omega, im_eps)
    }

    /// Synthesizes a table from the analytic Drude loss function
    /// Imε(ω) = ω_p²γ/(ω(ω²+γ²)) on a logarithmic grid.
    pub fn synthetic_drude(
        omega_p: f64,
        gamma: f64,
        omega_min: f64,
        omega_max: f64,
        points_per_decade: usize,
    ) -> Result<Self> {
        if !(omega_p > 0.0 && gamma > 0.0 && omega_min > 0.0 && omega_min < omega_max) {
            return Err(Error::domain(
                "synthetic Drude table needs positive parameters",
            ));
        }
        let decades = (omega_max / omega_min).log10();
        let n = ((decades * points_per_decade as f64).ceil() as usize).max(8) + 1;
        let grid =
            crate::grid::make_grid(omega_min, omega_max, n, crate::grid::GridScale::Logarithmic)?;
        let omega: Vec<f64> = grid.points().to_vec();
        let im_eps = omega
            .iter()
            .map(|&w| omega_p * omega_p * gamma / (w * (w * w + gamma * gamma)))
            .collect();
        OpticalTable::new(omega, im_eps)
    }

    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    pub fn im_eps(&self) -> &[f64] {
        &self.im_eps
    }

    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        false // invariant: at least 8 points
    }

    /// Local interpolation of Imε: log-log linear where both samples are
    /// positive (optical data is power-law-like across decades), plain linear
    /// when a sample is zero.
    fn interp_im_eps(&self, w: f64) -> f64 {
        debug_assert!(w >= self.omega[0] && w <= self.omega[self.len() - 1]);
        let i = match self.omega.partition_point(|&x| x <= w) {
            0 => 0,
            p if p >= self.len() => self.len() - 2,
            p => p - 1,
        };
        let (w0, w1) = (self.omega[i], self.omega[i + 1]);
        let (g0, g1) = (self.im_eps[i], self.im_eps[i + 1]);
        if g0 > 0.0 && g1 > 0.0 {
            let p = (g1 / g0).ln() / (w1 / w0).ln();
            g0 * (w / w0).powf(p)
        } else {
            g0 + (g1 - g0) * (w - w0) / (w1 - w0)
        }
    }
}

/// Dielectric-response description of a plate material.
#[derive(Debug, Clone, PartialEq)]
pub enum MaterialModel {
    /// Perfect reflector: r = 1 for both polarizations at every frequency.
    IdealMetal,
    /// Dissipationless free-electron gas.
    Plasma { omega_p: f64 },
    /// Free electrons with relaxation γ.
    Drude { omega_p: f64, gamma: f64 },
    /// Leontovich surface impedance, infrared-optics branch.
    Impedance { omega_p: f64 },
    /// Measured optical data plus a low-frequency extension.
    Tabulated {
        table: OpticalTable,
        extension: LowFreqExtension,
    },
}

impl MaterialModel {
    pub fn plasma(omega_p: f64) -> Result<Self> {
        let m = MaterialModel::Plasma { omega_p };
        m.validate()?;
        Ok(m)
    }

    pub fn drude(omega_p: f64, gamma: f64) -> Result<Self> {
        let m = MaterialModel::Drude { omega_p, gamma };
        m.validate()?;
        Ok(m)
    }

    pub fn impedance(omega_p: f64) -> Result<Self> {
        let m = MaterialModel::Impedance { omega_p };
        m.validate()?;
        Ok(m)
    }

    pub fn tabulated(table: OpticalTable, extension: LowFreqExtension) -> Result<Self> {
        extension.validate()?;
        Ok(MaterialModel::Tabulated { table, extension })
    }

    /// Gold with the plasma model, ω_p = 9.0 eV.
    pub fn gold_plasma() -> Self {
        MaterialModel::Plasma {
            omega_p: ev_to_angular_frequency(GOLD_PLASMA_FREQUENCY_EV),
        }
    }

    /// Gold with the Drude model, ω_p = 9.0 eV, γ = 0.035 eV.
    pub fn gold_drude() -> Self {
        MaterialModel::Drude {
            omega_p: ev_to_angular_frequency(GOLD_PLASMA_FREQUENCY_EV),
            gamma: ev_to_angular_frequency(GOLD_RELAXATION_FREQUENCY_EV),
        }
    }

    /// Gold described by the Leontovich impedance, infrared-optics branch.
    pub fn gold_impedance() -> Self {
        MaterialModel::Impedance {
            omega_p: ev_to_angular_frequency(GOLD_PLASMA_FREQUENCY_EV),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            MaterialModel::IdealMetal => Ok(()),
            MaterialModel::Plasma { omega_p } | MaterialModel::Impedance { omega_p } => {
                if !(*omega_p > 0.0) {
                    return Err(Error::domain(format!(
                        "plasma frequency must be positive, got {omega_p}"
                    )));
                }
                Ok(())
            }
            MaterialModel::Drude { omega_p, gamma } => {
                if !(*omega_p > 0.0) {
                    return Err(Error::domain(format!(
                        "plasma frequency must be positive, got {omega_p}"
                    )));
                }
                if !(*gamma >= 0.0) {
                    return Err(Error::domain(format!(
                        "relaxation frequency must be nonnegative, got {gamma}"
                    )));
                }
                Ok(())
            }
            MaterialModel::Tabulated { extension, .. } => extension.validate(),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            MaterialModel::IdealMetal => "ideal-metal",
            MaterialModel::Plasma { .. } => "plasma",
            MaterialModel::Drude { .. } => "drude",
            MaterialModel::Impedance { .. } => "impedance",
            MaterialModel::Tabulated { .. } => "tabulated",
        }
    }

    /// Plasma frequency if the model (or its table extension) carries one.
    pub fn plasma_frequency(&self) -> Option<f64> {
        match self {
            MaterialModel::IdealMetal => None,
            MaterialModel::Plasma { omega_p }
            | MaterialModel::Drude { omega_p, .. }
            | MaterialModel::Impedance { omega_p } => Some(*omega_p),
            MaterialModel::Tabulated { extension, .. } => extension.plasma_frequency(),
        }
    }

    /// Permittivity on the imaginary axis, ε(iξ), ξ > 0.
    ///
    /// The ξ = 0 point is never evaluated here; zero-frequency physics lives
    /// in the reflection module's limit rules.
    pub fn eps_imag_axis(&self, xi: f64) -> Result<f64> {
        if !(xi > 0.0) {
            return Err(Error::domain(format!(
                "eps_imag_axis requires xi > 0, got {xi}"
            )));
        }
        match self {
            MaterialModel::IdealMetal | MaterialModel::Impedance { .. } => {
                Err(Error::Unsupported {
                    operation: "eps_imag_axis",
                    kind: self.kind_name(),
                })
            }
            MaterialModel::Plasma { omega_p } => Ok(1.0 + (omega_p / xi).powi(2)),
            MaterialModel::Drude { omega_p, gamma } => {
                Ok(1.0 + omega_p * omega_p / (xi * (xi + gamma)))
            }
            MaterialModel::Tabulated { table, extension } => kk_point(table, extension, xi),
        }
    }

    /// Leontovich impedance on the imaginary axis (infrared-optics branch):
    /// Z(iξ) = ξ/√(ξ² + ω_p²), real, in [0, 1); Z(0) = 0.
    pub fn impedance_imag_axis(&self, xi: f64) -> Result<f64> {
        let MaterialModel::Impedance { omega_p } = self else {
            return Err(Error::Unsupported {
                operation: "impedance_imag_axis",
                kind: self.kind_name(),
            });
        };
        if !(xi >= 0.0) {
            return Err(Error::domain(format!(
                "impedance_imag_axis requires xi >= 0, got {xi}"
            )));
        }
        Ok(xi / xi.hypot(*omega_p))
    }

    /// Whether the Leontovich condition |Z| << 1 holds at this frequency
    /// (soft bound |Z| < 0.3).
    pub fn leontovich_valid(&self, xi: f64) -> Result<bool> {
        Ok(self.impedance_imag_axis(xi)?.abs() < 0.3)
    }

    /// Static permittivity ε(i0⁺) for extension-free tabulated materials
    /// (finite because the table carries no metallic low-frequency weight).
    pub(crate) fn static_eps(&self) -> Result<f64> {
        match self {
            MaterialModel::Tabulated {
                table,
                extension: LowFreqExtension::None,
            } => kk_integral(table, &LowFreqExtension::None, 0.0).map(|v| 1.0 + v),
            _ => Err(Error::Unsupported {
                operation: "static_eps",
                kind: self.kind_name(),
            }),
        }
    }
}

/// Kramers–Kronig transform of a table onto a grid of imaginary frequencies.
pub fn kk_transform(
    table: &OpticalTable,
    xi_grid: &Grid,
    extension: &LowFreqExtension,
) -> Result<Vec<(f64, f64)>> {
    extension.validate()?;
    xi_grid
        .iter()
        .map(|xi| kk_point(table, extension, xi).map(|eps| (xi, eps)))
        .collect()
}

fn kk_point(table: &OpticalTable, extension: &LowFreqExtension, xi: f64) -> Result<f64> {
    if !(xi > 0.0) {
        return Err(Error::domain(format!(
            "KK evaluation requires xi > 0, got {xi}"
        )));
    }
    Ok(1.0 + kk_integral(table, extension, xi)?)
}

/// ε(iξ) − 1 = (2/π)[∫_ext + ∫_table + ∫_tail] ω Imε(ω)/(ω²+ξ²) dω,
/// with the plasma extension's delta-function weight added analytically.
/// `xi = 0` is permitted only for `LowFreqExtension::None` (static limit).
fn kk_integral(table: &OpticalTable, extension: &LowFreqExtension, xi: f64) -> Result<f64> {
    let two_over_pi = std::f64::consts::FRAC_2_PI;
    let w_first = table.omega()[0];
    let w_last = table.omega()[table.len() - 1];

    let ext_part = match extension {
        LowFreqExtension::None => 0.0,
        LowFreqExtension::Drude { omega_p, gamma } => {
            if xi == 0.0 {
                return Err(Error::config(
                    "static permittivity is undefined for a metallic (drude) extension",
                ));
            }
            // ∫_0^{ω₀} ω_p²γ / ((ω²+γ²)(ω²+ξ²)) dω, finite at ω = 0.
            let (wp2, g) = (omega_p * omega_p, *gamma);
            let f = |w: f64| wp2 * g / ((w * w + g * g) * (w * w + xi * xi));
            let mut breaks = vec![0.0];
            for scale in [g.min(xi), g.max(xi)] {
                if scale > 0.0 && scale < w_first && scale > breaks[breaks.len() - 1] {
                    breaks.push(scale);
                }
            }
            breaks.push(w_first);
            two_over_pi
                * quad::adaptive_with_breakpoints(&f, &breaks, KK_REL_TOL, 0.0, "kk extension")?
                    .value
        }
        LowFreqExtension::Plasma { omega_p } => {
            if xi == 0.0 {
                return Err(Error::config(
                    "static permittivity is undefined for a metallic (plasma) extension",
                ));
            }
            (omega_p / xi).powi(2)
        }
    };

    // Table part in u = ln ω: ∫ ω Imε/(ω²+ξ²) dω = ∫ ω² Imε/(ω²+ξ²) du.
    let f_table = |u: f64| {
        let w = u.exp();
        let g = table.interp_im_eps(w.clamp(w_first, w_last));
        if g == 0.0 {
            return 0.0;
        }
        let w2 = w * w;
        w2 * g / (w2 + xi * xi)
    };
    let mut breaks: Vec<f64> = table.omega().iter().map(|w| w.ln()).collect();
    if xi > w_first && xi < w_last {
        let u_xi = xi.ln();
        let pos = breaks.partition_point(|&u| u < u_xi);
        if breaks[pos] != u_xi {
            breaks.insert(pos, u_xi);
        }
    }
    let table_part =
        quad::adaptive_with_breakpoints(&f_table, &breaks, KK_REL_TOL, 0.0, "kk table")?.value;

    // Tail: Imε = Imε(ω_N)(ω_N/ω)³ above the table,
    // ∫_W^∞ dω/(ω²(ω²+ξ²)) = (1/ξ²)[1/W − atan(ξ/W)/ξ], series for small ξ/W.
    let g_last = table.im_eps()[table.len() - 1];
    let tail_part = if g_last > 0.0 {
        let a = g_last * w_last.powi(3);
        let t = xi / w_last;
        let integral = if t < 1e-3 {
            let t2 = t * t;
            (1.0 / w_last.powi(3)) * (1.0 / 3.0 - t2 / 5.0 + t2 * t2 / 7.0 - t2 * t2 * t2 / 9.0)
        } else {
            (1.0 / (xi * xi)) * (1.0 / w_last - t.atan() / xi)
        };
        a * integral
    } else {
        0.0
    };

    Ok(ext_part + two_over_pi * (table_part + tail_part))
}
