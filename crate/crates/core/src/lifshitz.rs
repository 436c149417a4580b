//! Free energy, pressure, and entropy between two parallel semispaces.
//!
//! Finite temperature uses the Matsubara representation
//!
//!   F(z,T) = (k_B T / 2π) Σ′_{l≥0} ∫₀^∞ k dk Σ_{α∈{∥,⊥}}
//!            ln(1 − r_α⁽¹⁾ r_α⁽²⁾ e^{−2 q_l z}),   q_l = √(k² + ξ_l²/c²),
//!
//! with the l = 0 term half-weighted and its coefficients supplied by the
//! zero-frequency prescription. Pressure differentiates under the integral
//! sign:
//!
//!   P(z,T) = −(k_B T / π) Σ′_{l≥0} ∫₀^∞ k q_l dk Σ_α
//!            x_α e^{−2 q_l z} / (1 − x_α e^{−2 q_l z}),  x_α = r_α⁽¹⁾ r_α⁽²⁾.
//!
//! Quadrature runs in y = 2 q_l z so every kernel decays like e^{−y}; the
//! wavenumber is recovered as k = √((y−y_l)(y+y_l))/(2z) with y_l = 2ξ_l z/c.
//! Zero temperature replaces k_B T Σ′ by (ħ/2π)∫dξ. Both sums and integrals
//! carry explicit truncation estimates.
//!
//! When every zero-frequency coefficient is k-independent (Schwinger, Drude,
//! skin-effect impedance, static dielectrics) the l = 0 term has the closed
//! form −(k_B T/8πz³)[Li₃(x_∥) + Li₃(x_⊥)] (pressure) and
//! −(k_B T/16πz²)[Li₃(x_∥) + Li₃(x_⊥)] (free energy); the engine uses it,
//! which is what makes the Drude ½-factor exact.

use crate::constants::{C, HBAR, K_B, ZETA_3};
use crate::error::{Error, Result};
use crate::grid::Tolerances;
use crate::material::MaterialModel;
use crate::quad;
use crate::reflection::{Surface, WaveContext, ZeroFreqCoeffs, ZeroFreqPrescription};

use std::f64::consts::PI;

/// Two semispaces facing each other across a vacuum gap.
#[derive(Debug, Clone)]
pub struct PlateConfig {
    pub material_1: MaterialModel,
    pub material_2: MaterialModel,
    /// Gap width (m).
    pub separation: f64,
    /// Treatment of the l = 0 Matsubara term.
    pub zero_freq: ZeroFreqPrescription,
}

impl PlateConfig {
    pub fn new(
        material_1: MaterialModel,
        material_2: MaterialModel,
        separation: f64,
        zero_freq: ZeroFreqPrescription,
    ) -> Result<Self> {
        if !(separation > 0.0) {
            return Err(Error::domain(format!(
                "separation must be positive, got {separation} m"
            )));
        }
        material_1.validate()?;
        material_2.validate()?;
        // Prescription must resolve for both plates.
        ZeroFreqCoeffs::for_plate(&material_1, zero_freq)?;
        ZeroFreqCoeffs::for_plate(&material_2, zero_freq)?;
        Ok(PlateConfig {
            material_1,
            material_2,
            separation,
            zero_freq,
        })
    }

    /// Two identical plates.
    pub fn symmetric(
        material: MaterialModel,
        separation: f64,
        zero_freq: ZeroFreqPrescription,
    ) -> Result<Self> {
        PlateConfig::new(material.clone(), material, separation, zero_freq)
    }

    /// Same plates and prescription at a different gap.
    pub fn at_separation(&self, separation: f64) -> Result<Self> {
        PlateConfig::new(
            self.material_1.clone(),
            self.material_2.clone(),
            separation,
            self.zero_freq,
        )
    }
}

/// Temperature plus the Matsubara truncation policy.
#[derive(Debug, Clone, Copy)]
pub struct ThermalState {
    /// Temperature (K); 0 selects the continuous-frequency integral.
    pub temperature: f64,
    /// Hard cap on the number of nonzero Matsubara terms.
    pub l_max: u32,
    /// Required relative bound on the truncated tail of the l-sum.
    pub tail_bound: f64,
}

impl ThermalState {
    pub fn new(temperature: f64) -> Result<Self> {
        Self::with_truncation(temperature, 500_000, 1e-10)
    }

    pub fn with_truncation(temperature: f64, l_max: u32, tail_bound: f64) -> Result<Self> {
        if !(temperature >= 0.0) {
            return Err(Error::domain(format!(
                "temperature must be nonnegative, got {temperature} K"
            )));
        }
        if temperature > 0.0 && l_max < 1 {
            return Err(Error::domain(
                "l_max must be at least 1 at nonzero temperature",
            ));
        }
        if !(tail_bound > 0.0 && tail_bound <= 1e-2) {
            return Err(Error::domain(format!(
                "tail_bound must lie in (0, 1e-2], got {tail_bound}"
            )));
        }
        Ok(ThermalState {
            temperature,
            l_max,
            tail_bound,
        })
    }

    /// Zero temperature: evaluation goes through the continuous ξ integral,
    /// never through a truncated sum at tiny T.
    pub fn zero() -> Self {
        ThermalState {
            temperature: 0.0,
            l_max: 0,
            tail_bound: 1e-10,
        }
    }
}

/// Free energy per unit area with its decomposition over Matsubara terms.
#[derive(Debug, Clone)]
pub struct FreeEnergyResult {
    /// F(z, T) in J/m².
    pub value: f64,
    /// Contribution of each summed term, l = 0 first (empty on the T = 0 path).
    pub per_l_contributions: Vec<f64>,
    /// Signed estimate of the truncated remainder (sum tail, or the
    /// quadrature error bound at T = 0).
    pub truncation_estimate: f64,
}

/// Lifshitz evaluator carrying the numeric tolerances.
#[derive(Debug, Clone, Default)]
pub struct Engine {
    pub tolerances: Tolerances,
}

/// One Matsubara kernel: which integral the per-term quadrature computes.
#[derive(Clone, Copy)]
enum Kernel {
    /// ∫ y ln-kernel dy, prefactor 1/(8πz²); negative.
    FreeEnergy,
    /// ∫ y² rational-kernel dy, prefactor 1/(8πz³); positive.
    Pressure,
}

impl Engine {
    pub fn new(tolerances: Tolerances) -> Self {
        Engine { tolerances }
    }

    // ----- public operations -------------------------------------------------

    /// Free energy per unit area F(z, T).
    pub fn free_energy(&self, cfg: &PlateConfig, ts: &ThermalState) -> Result<FreeEnergyResult> {
        if ts.temperature == 0.0 {
            let (value, err) = self.zero_temperature(cfg, Kernel::FreeEnergy)?;
            return Ok(FreeEnergyResult {
                value,
                per_l_contributions: Vec::new(),
                truncation_estimate: err,
            });
        }
        self.matsubara_sum(cfg, ts, Kernel::FreeEnergy)
    }

    /// Casimir pressure P(z, T) = −∂F/∂z, evaluated from the analytic
    /// kernel derivative (negative for attraction).
    pub fn pressure(&self, cfg: &PlateConfig, ts: &ThermalState) -> Result<f64> {
        if ts.temperature == 0.0 {
            return Ok(-self.zero_temperature(cfg, Kernel::Pressure)?.0);
        }
        Ok(self.matsubara_sum(cfg, ts, Kernel::Pressure)?.value)
    }

    /// T = 0 free energy per unit area via (ħ/2π)∫₀^∞ dξ of the same kernel.
    pub fn zero_temperature_free_energy(&self, cfg: &PlateConfig) -> Result<f64> {
        Ok(self.zero_temperature(cfg, Kernel::FreeEnergy)?.0)
    }

    /// T = 0 pressure via the continuous-frequency integral.
    pub fn zero_temperature_pressure(&self, cfg: &PlateConfig) -> Result<f64> {
        Ok(-self.zero_temperature(cfg, Kernel::Pressure)?.0)
    }

    /// Fluctuating-field interaction entropy per unit area,
    /// S(T) = −∂F/∂T, by Richardson-extrapolated symmetric differences.
    ///
    /// Two extrapolants (step pairs (h, h/2) and (h/2, h/4), h = 0.01 T) must
    /// agree within `rel_deriv` up to the quadrature noise floor; their
    /// second-order Richardson combination is returned. May legitimately be
    /// negative at finite T.
    pub fn entropy(&self, cfg: &PlateConfig, temperature: f64) -> Result<f64> {
        if !(temperature > 0.0) {
            return Err(Error::domain(format!(
                "entropy requires T > 0, got {temperature} K"
            )));
        }
        // Differences of nearly equal free energies need a much tighter
        // quadrature and sum tail than a single evaluation.
        let tight = Engine::new(Tolerances {
            rel_quad: self.tolerances.rel_quad.min(1e-12),
            rel_sum_tail: self.tolerances.rel_sum_tail.min(1e-12),
            rel_deriv: self.tolerances.rel_deriv,
        });
        let h = 0.01 * temperature;
        let f_at = |t: f64| -> Result<f64> {
            let ts = ThermalState::with_truncation(t, 2_000_000, 1e-12)?;
            Ok(tight.matsubara_sum(cfg, &ts, Kernel::FreeEnergy)?.value)
        };

        let mut d = [0.0_f64; 3];
        let mut f_scale = 0.0_f64;
        for (i, step) in [h, 0.5 * h, 0.25 * h].iter().enumerate() {
            let f_minus = f_at(temperature - step)?;
            let f_plus = f_at(temperature + step)?;
            f_scale = f_scale.max(f_minus.abs()).max(f_plus.abs());
            d[i] = (f_minus - f_plus) / (2.0 * step);
        }
        let s1 = (4.0 * d[1] - d[0]) / 3.0;
        let s2 = (4.0 * d[2] - d[1]) / 3.0;
        let s = (16.0 * s2 - s1) / 15.0;

        let disagreement = (s2 - s1).abs();
        let noise_floor = 100.0 * 1e-12 * f_scale / (0.25 * h);
        if disagreement > self.tolerances.rel_deriv * s.abs() + noise_floor {
            return Err(Error::Numeric {
                context: "entropy",
                achieved: s,
                error_bound: disagreement,
                detail: format!(
                    "temperature-derivative estimates disagree: {s1:e} vs {s2:e} at T = {temperature} K"
                ),
            });
        }
        Ok(s)
    }

    /// The l = 0 (classical) term of the pressure. Exactly
    /// −k_B T ζ(3)/(4π z³) for the Schwinger prescription and exactly half
    /// that for Drude; quadrature otherwise. Zero at T = 0.
    pub fn classical_term(&self, cfg: &PlateConfig, ts: &ThermalState) -> Result<f64> {
        let (tm, te) = self.classical_term_by_polarization(cfg, ts)?;
        Ok(tm + te)
    }

    /// The l = 0 pressure term split into (TM, TE) contributions.
    pub fn classical_term_by_polarization(
        &self,
        cfg: &PlateConfig,
        ts: &ThermalState,
    ) -> Result<(f64, f64)> {
        if ts.temperature == 0.0 {
            return Ok((0.0, 0.0));
        }
        self.zero_term(cfg, ts.temperature, Kernel::Pressure)
    }

    // ----- l = 0 term ---------------------------------------------------------

    /// Half-weighted l = 0 contribution split by polarization.
    /// For [`Kernel::Pressure`] the parts are in Pa, for
    /// [`Kernel::FreeEnergy`] in J/m²; both negative for reflective plates.
    fn zero_term(&self, cfg: &PlateConfig, temperature: f64, kernel: Kernel) -> Result<(f64, f64)> {
        let z = cfg.separation;
        let c1 = ZeroFreqCoeffs::for_plate(&cfg.material_1, cfg.zero_freq)?;
        let c2 = ZeroFreqCoeffs::for_plate(&cfg.material_2, cfg.zero_freq)?;

        let prefactor = match kernel {
            Kernel::Pressure => -K_B * temperature / (8.0 * PI * z.powi(3)),
            Kernel::FreeEnergy => -K_B * temperature / (16.0 * PI * z * z),
        };

        // TM zero-frequency coefficients are k-independent for every
        // supported prescription (1 for metals, a constant for static
        // dielectrics).
        let tm_product = c1.at(1.0).r_par * c2.at(1.0).r_par;
        let tm = prefactor * li3(tm_product);

        let te = match (c1.constant(), c2.constant()) {
            (Some((_, p1)), Some((_, p2))) => prefactor * li3(p1 * p2),
            _ => {
                // k-dependent TE profile (plasma or infrared impedance):
                // integrate over y = 2kz. Quadrature of Σ_n x^n e^{-ny}
                // weighted by y (free energy) or y² (pressure); the constant
                // (k-independent) case reduces to 2 Li₃ / −Li₃ respectively,
                // matching the closed forms above.
                let rel = self.tolerances.rel_quad;
                let f = |y: f64| {
                    let k = y / (2.0 * z);
                    let x = c1.at(k).r_perp * c2.at(k).r_perp;
                    let damp = (-y).exp();
                    match kernel {
                        Kernel::Pressure => {
                            let u = x * damp;
                            y * y * u / (1.0 - u)
                        }
                        Kernel::FreeEnergy => y * (-x * damp).ln_1p(),
                    }
                };
                let integral = quad::exp_tail(&f, 0.0, 1.0, rel, "classical TE term")?.value;
                match kernel {
                    Kernel::Pressure => 0.5 * prefactor * integral,
                    Kernel::FreeEnergy => -prefactor * integral,
                }
            }
        };
        Ok((tm, te))
    }

    // ----- l >= 1 terms and the Matsubara sum ---------------------------------

    /// Integral of the chosen kernel at one imaginary frequency, including
    /// its 1/(8πz^{2|3}) prefactor but not k_B T. Free-energy kernels are
    /// negative, pressure kernels positive.
    fn per_frequency(&self, cfg: &PlateConfig, xi: f64, kernel: Kernel) -> Result<f64> {
        let z = cfg.separation;
        let s1 = Surface::at(&cfg.material_1, xi)?;
        let s2 = Surface::at(&cfg.material_2, xi)?;
        let y_min = 2.0 * xi * z / C;
        let rel = self.tolerances.rel_quad;

        let f = |y: f64| {
            let q = y / (2.0 * z);
            let k = ((y - y_min) * (y + y_min)).sqrt() / (2.0 * z);
            let ctx = WaveContext { xi, k, q };
            let r1 = s1.coefficients(&ctx);
            let r2 = s2.coefficients(&ctx);
            let x_tm = r1.r_par * r2.r_par;
            let x_te = r1.r_perp * r2.r_perp;
            let damp = (-y).exp();
            match kernel {
                Kernel::FreeEnergy => y * ((-x_tm * damp).ln_1p() + (-x_te * damp).ln_1p()),
                Kernel::Pressure => {
                    let (u, v) = (x_tm * damp, x_te * damp);
                    y * y * (u / (1.0 - u) + v / (1.0 - v))
                }
            }
        };
        let integral = quad::exp_tail(&f, y_min, 1.0, rel, "matsubara term")?.value;
        let prefactor = match kernel {
            Kernel::FreeEnergy => 1.0 / (8.0 * PI * z * z),
            Kernel::Pressure => 1.0 / (8.0 * PI * z.powi(3)),
        };
        Ok(prefactor * integral)
    }

    /// Σ′ over Matsubara terms with the three-consecutive-small-terms stop
    /// rule and a geometric tail estimate recorded in the result.
    fn matsubara_sum(
        &self,
        cfg: &PlateConfig,
        ts: &ThermalState,
        kernel: Kernel,
    ) -> Result<FreeEnergyResult> {
        let t = ts.temperature;
        let kt = K_B * t;
        let (tm0, te0) = self.zero_term(cfg, t, kernel)?;
        let term0 = tm0 + te0;

        let mut per_l = vec![term0];
        let mut sum = term0;
        let mut comp = 0.0_f64;
        let mut consecutive_small = 0u32;
        let mut prev_mag = f64::INFINITY;
        let mut last_mag = 0.0_f64;

        for l in 1..=ts.l_max {
            let xi = 2.0 * PI * kt * f64::from(l) / HBAR;
            let raw = self.per_frequency(cfg, xi, kernel)?;
            let term = match kernel {
                Kernel::FreeEnergy => kt * raw,
                Kernel::Pressure => -kt * raw,
            };
            per_l.push(term);
            let y = term - comp;
            let s = sum + y;
            comp = (s - sum) - y;
            sum = s;

            let mag = term.abs();
            if mag <= ts.tail_bound.max(self.tolerances.rel_sum_tail) * sum.abs() {
                consecutive_small += 1;
            } else {
                consecutive_small = 0;
            }
            if consecutive_small >= 3 {
                // Terms decay like e^{-4π k_B T z l/(ħc)}; the measured ratio
                // feeds a geometric tail. Ratios indistinguishable from 1 are
                // noise-floor artifacts, so keep summing instead of trusting
                // them.
                let ratio = if prev_mag > 0.0 && prev_mag.is_finite() {
                    (mag / prev_mag).min(0.999)
                } else {
                    0.5
                };
                let tail = mag * ratio / (1.0 - ratio);
                if tail <= ts.tail_bound * sum.abs() {
                    let truncation = tail.copysign(term);
                    return Ok(FreeEnergyResult {
                        value: sum,
                        per_l_contributions: per_l,
                        truncation_estimate: truncation,
                    });
                }
            }
            prev_mag = mag;
            last_mag = mag;
        }

        Err(Error::Numeric {
            context: "matsubara sum",
            achieved: sum,
            error_bound: last_mag,
            detail: format!(
                "sum over {} terms did not meet tail bound {:e} at T = {} K, z = {} m",
                ts.l_max, ts.tail_bound, t, cfg.separation
            ),
        })
    }

    // ----- T = 0 route ---------------------------------------------------------

    /// (ħ/2π)∫₀^∞ dξ of the per-frequency kernel, returned with its error
    /// bound. Positive magnitude for pressure (sign applied by callers).
    fn zero_temperature(&self, cfg: &PlateConfig, kernel: Kernel) -> Result<(f64, f64)> {
        let z = cfg.separation;
        // ξ = (c/2z)s makes the outer integrand decay like e^{-s}.
        let scale = C / (2.0 * z);
        let inner_failure: std::cell::RefCell<Option<Error>> = std::cell::RefCell::new(None);
        let f = |s: f64| -> f64 {
            match self.per_frequency(cfg, scale * s, kernel) {
                Ok(v) => v,
                Err(e) => {
                    let mut slot = inner_failure.borrow_mut();
                    if slot.is_none() {
                        *slot = Some(e);
                    }
                    0.0
                }
            }
        };
        let rel = self.tolerances.rel_quad;
        let outer = quad::exp_tail(&f, 0.0, 1.0, rel, "zero-temperature frequency integral")?;
        if let Some(e) = inner_failure.into_inner() {
            return Err(e);
        }
        let prefactor = HBAR * scale / (2.0 * PI);
        Ok((prefactor * outer.value, prefactor * outer.error))
    }
}

/// Trilogarithm on [0, 1]: Σ_{n≥1} xⁿ/n³.
///
/// Direct series below 0.99; above that the log expansion
/// Li₃(e^{−μ}) = ζ(3) − ζ(2)μ + μ²(3/2 − ln μ)/2 + μ³/12 − μ⁴/288 + O(μ⁶).
fn li3(x: f64) -> f64 {
    debug_assert!((0.0..=1.0 + 1e-12).contains(&x));
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return ZETA_3;
    }
    if x < 0.99 {
        let mut sum = 0.0;
        let mut power = 1.0;
        for n in 1..10_000u64 {
            power *= x;
            let term = power / ((n * n * n) as f64);
            sum += term;
            if term < 1e-17 * sum {
                break;
            }
        }
        sum
    } else {
        let mu = -x.ln();
        let zeta2 = PI * PI / 6.0;
        ZETA_3 - zeta2 * mu + mu * mu * (1.5 - mu.ln()) / 2.0 + mu.powi(3) / 12.0
            - mu.powi(4) / 288.0
    }
}

/// Closed-form classical pressure −k_B T ζ(3)/(4π z³) of the Schwinger
/// (ideal-metal) prescription.
pub fn schwinger_classical_pressure(separation: f64, temperature: f64) -> Result<f64> {
    if !(separation > 0.0) {
        return Err(Error::domain("separation must be positive"));
    }
    if !(temperature >= 0.0) {
        return Err(Error::domain("temperature must be nonnegative"));
    }
    Ok(-K_B * temperature * ZETA_3 / (4.0 * PI * separation.powi(3)))
}
