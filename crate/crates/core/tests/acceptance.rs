//! End-to-end acceptance gates. Each case prints its own PASS/FAIL line with
//! the measured numbers (visible under `--nocapture`, or on failure).

use casimir_core::constants::{C, HBAR};
use casimir_core::geometry::{
    ideal_sphere_force, oscillator_analysis, rough_pressure, EquilibriumKind, OscillatorConfig,
    RoughnessProfile, SphereConfig,
};
use casimir_core::lifshitz::schwinger_classical_pressure;
use casimir_core::yukawa::{
    constrain, yukawa_pressure, ExperimentBand, Layer, LayeredPlate, YukawaParams,
};
use casimir_core::{
    make_grid, Engine, GridScale, LowFreqExtension, MaterialModel, OpticalTable, PlateConfig,
    ThermalState, ZeroFreqPrescription,
};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::time::Instant;

fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "[{}] {criterion}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "{criterion} failed: {detail}");
}

fn ideal_plates(z: f64) -> PlateConfig {
    PlateConfig::symmetric(
        MaterialModel::IdealMetal,
        z,
        ZeroFreqPrescription::SchwingerIdeal,
    )
    .unwrap()
}

fn rel_dev(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn criterion_01_ideal_metal_pressure() {
    let start = Instant::now();
    let engine = Engine::default();
    let mut worst = 0.0_f64;
    for z in [100e-9, 1e-6, 5e-6] {
        let p = engine.zero_temperature_pressure(&ideal_plates(z)).unwrap();
        let closed = -PI * PI * HBAR * C / (240.0 * z.powi(4));
        worst = worst.max(rel_dev(p, closed));
    }
    let p_1um = engine
        .zero_temperature_pressure(&ideal_plates(1e-6))
        .unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    report(
        "criterion 1 (ideal-metal pressure)",
        worst < 1e-6 && rel_dev(p_1um, -1.3e-3) < 0.02 && elapsed < 1.0,
        &format!(
            "max closed-form deviation {worst:.2e} (tol 1e-6); P(1 um) = {p_1um:.4e} Pa vs -1.3 mPa; runtime {elapsed:.2} s (< 1 s)"
        ),
    );
}

#[test]
fn criterion_02_classical_limit() {
    let start = Instant::now();
    let engine = Engine::default();
    let p = engine
        .pressure(&ideal_plates(6e-6), &ThermalState::new(300.0).unwrap())
        .unwrap();
    let classical = schwinger_classical_pressure(6e-6, 300.0).unwrap();
    let dev = rel_dev(p, classical);
    let elapsed = start.elapsed().as_secs_f64();
    report(
        "criterion 2 (classical limit at 6 um, 300 K)",
        dev < 0.02 && elapsed < 5.0,
        &format!(
            "P = {p:.6e} Pa vs -k_B T zeta(3)/(4 pi z^3) = {classical:.6e} Pa, deviation {:.3}% (tol 2%); runtime {elapsed:.2} s",
            100.0 * dev
        ),
    );
}

#[test]
fn criterion_03_drude_half_factor() {
    let engine = Engine::default();
    let (z, t) = (6e-6, 300.0);
    let ts = ThermalState::new(t).unwrap();

    // Analytic half: closed forms, no quadrature involved.
    let schwinger = engine.classical_term(&ideal_plates(z), &ts).unwrap();
    let omega_p = 100.0 * C / z;
    let gamma = MaterialModel::gold_drude().plasma_frequency().unwrap() * 0.035 / 9.0;
    let drude_cfg = PlateConfig::symmetric(
        MaterialModel::drude(omega_p, gamma).unwrap(),
        z,
        ZeroFreqPrescription::Drude,
    )
    .unwrap();
    let drude_classical = engine.classical_term(&drude_cfg, &ts).unwrap();
    let exact_half = drude_classical == 0.5 * schwinger;

    // Full pressure approaches the same ratio as the conductivity grows.
    let p_full = engine.pressure(&drude_cfg, &ts).unwrap();
    let ratio = p_full / schwinger;
    let dev = (ratio - 0.5).abs() / 0.5;
    report(
        "criterion 3 (Drude half-factor)",
        exact_half && dev < 0.01,
        &format!(
            "classical term ratio = 0.5 exactly: {exact_half}; full-pressure ratio {ratio:.5} deviates {:.3}% from 1/2 (tol 1%)",
            100.0 * dev
        ),
    );
}

#[test]
fn criterion_04_plasma_to_ideal_convergence() {
    let engine = Engine::default();
    let z = 1e-6;
    let ideal = engine.zero_temperature_pressure(&ideal_plates(z)).unwrap();
    let mut ratios = Vec::new();
    for mult in [1.0, 3.0, 10.0, 30.0, 100.0] {
        let cfg = PlateConfig::symmetric(
            MaterialModel::plasma(mult * C / z).unwrap(),
            z,
            ZeroFreqPrescription::Plasma,
        )
        .unwrap();
        let p = engine.zero_temperature_pressure(&cfg).unwrap();
        ratios.push(p / ideal);
    }
    let monotone = ratios.windows(2).all(|w| w[1] > w[0]);
    report(
        "criterion 4a (plasma-to-ideal monotonicity)",
        monotone,
        &format!("pressure ratios over omega_p = {{1,3,10,30,100}} c/z: {ratios:.5?}"),
    );
    // Known red: the exact T = 0 pressure ratio at omega_p = 100 c/z is
    // 0.94898 (perturbatively 1 - (16/3)(c/(omega_p z)) + 24(c/(omega_p z))^2,
    // confirmed by independent quadrature), so this 0.95 threshold is
    // unattainable by ~0.1%; it is met only by the free-energy ratio
    // (0.9614). Asserted as encoded rather than weakened. See README.
    let top = *ratios.last().unwrap();
    report(
        "criterion 4b (ratio exceeds 0.95 at omega_p = 100 c/z)",
        top > 0.95,
        &format!("ratio at the top of the sweep = {top:.5} (threshold 0.95)"),
    );
}

#[test]
fn criterion_05_nernst_and_entropy_ordering() {
    let start = Instant::now();
    let engine = Engine::default();
    let z = 1e-6;
    let plasma = PlateConfig::symmetric(
        MaterialModel::gold_plasma(),
        z,
        ZeroFreqPrescription::Plasma,
    )
    .unwrap();
    let drude = PlateConfig::symmetric(MaterialModel::gold_drude(), z, ZeroFreqPrescription::Drude)
        .unwrap();

    let s_cold = engine.entropy(&plasma, 1.0).unwrap();
    let s_warm = engine.entropy(&plasma, 300.0).unwrap();
    let nernst = s_cold.abs() < 1e-3 * s_warm.abs();

    let mut ordering = true;
    let mut curves = String::new();
    for t in [1.0, 5.0, 10.0, 20.0, 35.0, 50.0] {
        let sp = engine.entropy(&plasma, t).unwrap();
        let sd = engine.entropy(&drude, t).unwrap();
        ordering &= sd < sp;
        curves.push_str(&format!(" T={t}: S_D={sd:.2e} S_P={sp:.2e};"));
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        "criterion 5 (Nernst check and Drude-below-plasma entropy)",
        nernst && ordering && elapsed < 120.0,
        &format!(
            "|S(1K)|/|S(300K)| = {:.2e} (tol 1e-3); ordering S_Drude < S_plasma on [1,50] K: {ordering};{curves} runtime {elapsed:.1} s (< 120 s)",
            s_cold.abs() / s_warm.abs()
        ),
    );
}

#[test]
fn criterion_06_prescription_locality() {
    let engine = Engine::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0ca5_1413);
    let mut worst = 0.0_f64;
    for _ in 0..5 {
        let z = 10f64.powf(rng.gen_range(-6.7..-5.5));
        let t = rng.gen_range(50.0..600.0);
        let ts = ThermalState::new(t).unwrap();
        let gold = MaterialModel::gold_drude();
        let cfg_d = PlateConfig::symmetric(gold.clone(), z, ZeroFreqPrescription::Drude).unwrap();
        let cfg_p = PlateConfig::symmetric(gold, z, ZeroFreqPrescription::Plasma).unwrap();

        let diff_full =
            engine.pressure(&cfg_d, &ts).unwrap() - engine.pressure(&cfg_p, &ts).unwrap();
        let (_, te_d) = engine.classical_term_by_polarization(&cfg_d, &ts).unwrap();
        let (_, te_p) = engine.classical_term_by_polarization(&cfg_p, &ts).unwrap();
        let diff_classical = te_d - te_p;
        let scale = engine.pressure(&cfg_p, &ts).unwrap().abs();
        worst = worst.max((diff_full - diff_classical).abs() / scale);
    }
    report(
        "criterion 6 (Drude-vs-plasma difference lives at l = 0 TE)",
        worst < 1e-9,
        &format!("worst |(dP_full - dP_l0TE)|/|P| = {worst:.2e} over 5 random (z, T) (tol rel_quad = 1e-9)"),
    );
}

#[test]
fn criterion_07_pfa_identity() {
    // Algebraic identity: 2 pi R x the ideal plate energy density is the
    // sphere formula.
    let (r, z) = (0.125_f64, 1e-6_f64);
    let via_pfa = 2.0 * PI * r * (-PI * PI * HBAR * C / (720.0 * z.powi(3)));
    let closed = -PI.powi(3) * HBAR * C * r / (360.0 * z.powi(3));
    let identity_dev = rel_dev(via_pfa, closed);

    let force = ideal_sphere_force(&SphereConfig::new(r, z).unwrap()).unwrap();
    let value_dev = rel_dev(force, -3.40e-10);
    report(
        "criterion 7 (PFA identity and sphere-force value)",
        identity_dev < 1e-10 && value_dev < 0.005,
        &format!(
            "identity deviation {identity_dev:.2e} (tol 1e-10); F(R = 12.5 cm, z = 1 um) = {force:.4e} N vs -3.40e-10 N ({:.2}%, tol 0.5%)",
            100.0 * value_dev
        ),
    );
}

#[test]
fn criterion_08_kramers_kronig_oracle() {
    let engine = Engine::default();
    let omega_p = 1.37e16;
    let gamma = 5.3e13;
    let table = OpticalTable::synthetic_drude(omega_p, gamma, 1e12, 1e18, 40).unwrap();
    let tabulated =
        MaterialModel::tabulated(table, LowFreqExtension::Drude { omega_p, gamma }).unwrap();
    let analytic = MaterialModel::drude(omega_p, gamma).unwrap();

    let xi_grid = make_grid(1e-3 * omega_p, 10.0 * omega_p, 31, GridScale::Logarithmic).unwrap();
    let mut worst_eps = 0.0_f64;
    for xi in xi_grid.iter() {
        let dev = rel_dev(
            tabulated.eps_imag_axis(xi).unwrap(),
            analytic.eps_imag_axis(xi).unwrap(),
        );
        worst_eps = worst_eps.max(dev);
    }

    let ts = ThermalState::new(300.0).unwrap();
    let p_tab = engine
        .pressure(
            &PlateConfig::symmetric(tabulated, 200e-9, ZeroFreqPrescription::Drude).unwrap(),
            &ts,
        )
        .unwrap();
    let p_analytic = engine
        .pressure(
            &PlateConfig::symmetric(analytic, 200e-9, ZeroFreqPrescription::Drude).unwrap(),
            &ts,
        )
        .unwrap();
    let p_dev = rel_dev(p_tab, p_analytic);
    report(
        "criterion 8 (Kramers-Kronig round trip)",
        worst_eps < 5e-3 && p_dev < 0.01,
        &format!(
            "worst eps(i xi) deviation {:.3}% over [1e-3, 10] omega_p (tol 0.5%); pressure at 200 nm: {p_tab:.5e} vs {p_analytic:.5e} Pa ({:.3}%, tol 1%)",
            100.0 * worst_eps,
            100.0 * p_dev
        ),
    );
}

// ---- criterion 9: brute-force Yukawa oracle --------------------------------

/// Midpoint-rule 3-D integration of the Yukawa pair potential:
/// cell size λ/15, lateral truncation radius 20λ with the analytic
/// lateral-tail correction 2πλ e^{−√(S²+d²)/λ}, depth truncation 20λ,
/// pressure by symmetric z-differentiation of the energy.
struct BruteForceYukawa {
    lambda: f64,
    cell: f64,
    /// Squared lateral radii of one quadrant of cell centres within 20λ.
    quadrant_r2: Vec<f64>,
    depth_cells: usize,
}

impl BruteForceYukawa {
    fn new(lambda: f64) -> Self {
        let cell = lambda / 15.0;
        let radius = 20.0 * lambda;
        let per_side = (radius / cell).ceil() as usize;
        let mut quadrant_r2 = Vec::new();
        for ix in 0..per_side {
            let x = (ix as f64 + 0.5) * cell;
            for iy in 0..per_side {
                let y = (iy as f64 + 0.5) * cell;
                let r2 = x * x + y * y;
                if r2 <= radius * radius {
                    quadrant_r2.push(r2);
                }
            }
        }
        BruteForceYukawa {
            lambda,
            cell,
            quadrant_r2,
            depth_cells: (20.0f64 * 15.0).round() as usize,
        }
    }

    /// ∫ d²s e^{−r/λ}/r over the truncated sheet at normal distance `d`,
    /// plus the analytic tail beyond the truncation radius.
    fn sheet_integral(&self, d: f64) -> f64 {
        let lambda = self.lambda;
        let mut sum = 0.0;
        for &r2 in &self.quadrant_r2 {
            let r = (r2 + d * d).sqrt();
            sum += (-r / lambda).exp() / r;
        }
        let radius = 20.0 * lambda;
        let tail = 2.0 * PI * lambda * (-(radius * radius + d * d).sqrt() / lambda).exp();
        4.0 * sum * self.cell * self.cell + tail
    }

    /// Cell-averaged density: the kernel is midpoint-sampled, but the
    /// piecewise-constant density factor is integrated exactly so layer
    /// boundaries need not align with the cell grid.
    fn cell_density(plate: &LayeredPlate, lo: f64, hi: f64) -> f64 {
        let mut top = 0.0_f64;
        let mut mass = 0.0_f64;
        for layer in plate.layers() {
            let bottom = match layer.thickness {
                Some(t) => top + t,
                None => f64::INFINITY,
            };
            let overlap = (hi.min(bottom) - lo.max(top)).max(0.0);
            mass += layer.density * overlap;
            top = bottom;
            if top >= hi {
                break;
            }
        }
        mass / (hi - lo)
    }

    /// Energy per unit area at gap `z` over the truncated volumes.
    fn energy(&self, p1: &LayeredPlate, p2: &LayeredPlate, z: f64, alpha: f64) -> f64 {
        let n = self.depth_cells;
        let rho1: Vec<f64> = (0..n)
            .map(|i| Self::cell_density(p1, i as f64 * self.cell, (i as f64 + 1.0) * self.cell))
            .collect();
        let rho2: Vec<f64> = (0..n)
            .map(|j| Self::cell_density(p2, j as f64 * self.cell, (j as f64 + 1.0) * self.cell))
            .collect();
        // Convolution over the shared depth grid: d = z + t1 + t2 depends on
        // i + j only.
        let mut weight = vec![0.0_f64; 2 * n - 1];
        for (i, a) in rho1.iter().enumerate() {
            for (j, b) in rho2.iter().enumerate() {
                weight[i + j] += a * b;
            }
        }
        let mut energy = 0.0;
        for (m, w) in weight.iter().enumerate() {
            let d = z + (m as f64 + 1.0) * self.cell;
            energy += w * self.sheet_integral(d);
        }
        -casimir_core::constants::G * alpha * energy * self.cell * self.cell
    }

    fn pressure(&self, p1: &LayeredPlate, p2: &LayeredPlate, z: f64, alpha: f64) -> f64 {
        let dz = 0.01 * self.lambda;
        let e_plus = self.energy(p1, p2, z + dz, alpha);
        let e_minus = self.energy(p1, p2, z - dz, alpha);
        -(e_plus - e_minus) / (2.0 * dz)
    }
}

#[test]
fn criterion_09_yukawa_brute_force_oracle() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5ca1ab1e);
    let mut worst = 0.0_f64;
    let mut lines = String::new();
    for case in 0..5 {
        let lambda = 10f64.powf(rng.gen_range(-6.5..-5.8));
        let z = rng.gen_range(0.2..3.0) * lambda;
        let make_plate = |rng: &mut ChaCha8Rng| {
            let coats = rng.gen_range(0..=2);
            let mut layers = Vec::new();
            for _ in 0..coats {
                layers.push(Layer::coating(
                    rng.gen_range(0.1..3.0) * lambda,
                    rng.gen_range(1_000.0..20_000.0),
                ));
            }
            layers.push(Layer::substrate(rng.gen_range(1_000.0..20_000.0)));
            LayeredPlate::new(layers).unwrap()
        };
        let p1 = make_plate(&mut rng);
        let p2 = make_plate(&mut rng);
        let params = YukawaParams::new(1.0, lambda).unwrap();

        let analytic = yukawa_pressure(&p1, &p2, z, &params).unwrap();
        let brute = BruteForceYukawa::new(lambda).pressure(&p1, &p2, z, 1.0);
        let dev = rel_dev(brute, analytic);
        worst = worst.max(dev);
        lines.push_str(&format!(
            " case {case}: z/lambda={:.2}, analytic={analytic:.4e}, brute={brute:.4e}, dev={:.3}%;",
            z / lambda,
            100.0 * dev
        ));
    }

    // Linearity of the exclusion curve in a global band scale.
    let gold = LayeredPlate::homogeneous(19_300.0).unwrap();
    let band =
        ExperimentBand::new(vec![(170e-9, 1e-3), (400e-9, 0.6e-3), (700e-9, 0.4e-3)]).unwrap();
    let band_scaled =
        ExperimentBand::new(vec![(170e-9, 1e-2), (400e-9, 0.6e-2), (700e-9, 0.4e-2)]).unwrap();
    let grid = make_grid(3e-8, 1e-5, 21, GridScale::Logarithmic).unwrap();
    let c1 = constrain(&band, &gold, &gold, &grid).unwrap();
    let c10 = constrain(&band_scaled, &gold, &gold, &grid).unwrap();
    let linear = c1
        .points
        .iter()
        .zip(&c10.points)
        .all(|(a, b)| rel_dev(b.alpha_max, 10.0 * a.alpha_max) < 1e-14 && a.z_star == b.z_star);

    let elapsed = start.elapsed().as_secs_f64();
    report(
        "criterion 9 (Yukawa brute-force oracle)",
        worst < 0.01 && linear && elapsed < 300.0,
        &format!(
            "worst analytic-vs-brute deviation {:.3}% (tol 1%);{lines} constraint linearity in band scale: {linear}; runtime {elapsed:.1} s (< 300 s)",
            100.0 * worst
        ),
    );
}

#[test]
fn criterion_10_roughness_strengthening() {
    let engine = Engine::default();
    let plates = ideal_plates(100e-9);
    let ts = ThermalState::zero();
    let p0 = engine.pressure(&plates, &ts).unwrap();

    let zero_profile = RoughnessProfile::new(vec![0.0], vec![1.0]).unwrap();
    let identity = rough_pressure(&engine, &plates, &ts, &zero_profile).unwrap() == p0;

    let pm5 = RoughnessProfile::symmetric(5e-9).unwrap();
    let ratio = rough_pressure(&engine, &plates, &ts, &pm5).unwrap() / p0;
    // Closed-form average over the ideal z^{-4} law. (This evaluates to
    // 1.02522; the spec's quoted 1.0151 is the z^{-3} average and
    // contradicts its own formula — see the decisions ledger.)
    let closed_form = 0.5 * ((100.0_f64 / 95.0).powi(4) + (100.0_f64 / 105.0).powi(4));
    report(
        "criterion 10 (roughness strengthens attraction)",
        identity && (ratio - closed_form).abs() < 1e-4,
        &format!(
            "zero profile exact identity: {identity}; |P_rough|/|P| = {ratio:.6} vs closed form {closed_form:.6} (tol 1e-4), strengthening {:.3}%",
            100.0 * (ratio - 1.0)
        ),
    );
}

#[test]
fn criterion_11_oscillator_bistability() {
    let engine = Engine::default();
    let grid = make_grid(1e-9, 90e-9, 180, GridScale::Linear).unwrap();
    let hooke = (0.02_f64 / 1e-11).sqrt();

    let mut flags = Vec::new();
    let mut freqs = Vec::new();
    let mut freq_below = true;
    for z0_nm in [300.0, 260.0, 220.0, 180.0, 160.0, 150.0, 140.0, 130.0] {
        let osc = OscillatorConfig {
            stiffness: 0.02,
            rest_separation: z0_nm * 1e-9,
            sphere_radius: 150e-6,
            effective_mass: 1e-11,
            plates: ideal_plates(1e-6),
            thermal: ThermalState::zero(),
        };
        let out = oscillator_analysis(&engine, &osc, &grid).unwrap();
        flags.push(out.bistable);
        if let Some(f) = out.local_minimum_frequency {
            freqs.push(f);
            freq_below &= f < hooke;
        }
        // Equilibria stay sorted and classified.
        assert!(out.equilibria.windows(2).all(|w| w[0].shift < w[1].shift));
        let _ = out
            .equilibria
            .iter()
            .filter(|e| e.kind == EquilibriumKind::Maximum)
            .count();
    }
    // Frequency shift grows monotonically as the gap closes.
    let freq_seen = !freqs.is_empty();
    let freq_monotone = freqs.windows(2).all(|w| w[1] < w[0]);
    let first_on = flags.iter().position(|&b| b);
    let single_transition = match first_on {
        Some(i) => flags[..i].iter().all(|&b| !b) && flags[i..].iter().all(|&b| b),
        None => false,
    };
    report(
        "criterion 11 (oscillator bistability onset)",
        !flags[0]
            && *flags.last().unwrap()
            && single_transition
            && freq_seen
            && freq_below
            && freq_monotone,
        &format!(
            "bistable flags over z0 = 300..130 nm sweep: {flags:?} (single off-to-on transition: {single_transition}); local-minimum frequency strictly below sqrt(K/m): {freq_below}, monotone in z0: {freq_monotone}"
        ),
    );
}
