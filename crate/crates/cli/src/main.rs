//! `casimir` — dispersion-force calculations from the command line.
//!
//! Boundary units: separations in nm, temperatures in K, energies in eV,
//! densities in kg/m³, Yukawa ranges in m; all outputs are SI. Every command
//! echoes its resolved configuration into the output metadata so a run can
//! be reproduced bit-exactly. Sweeps parallelize over grid points
//! (RAYON_NUM_THREADS caps the worker count) with output identical to serial
//! execution.

use casimir_cli::{output, parse};

use casimir_core::geometry::{
    oscillator_analysis, pfa_sphere_force, rough_pressure, OscillatorConfig, SphereConfig,
};
use casimir_core::material::kk_transform;
use casimir_core::yukawa::{constrain, ExperimentBand};
use casimir_core::{Engine, LowFreqExtension, MaterialModel, PlateConfig, ThermalState};

use clap::{Args, Parser, Subcommand};
use output::{write_atomic, CurveOutput, OutputFormat};
use rayon::prelude::*;
use serde::Deserialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Debug)]
enum CliError {
    Usage(String),
    Io(String),
    Core(casimir_core::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<casimir_core::Error> for CliError {
    fn from(e: casimir_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<String> for CliError {
    fn from(m: String) -> Self {
        CliError::Usage(m)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(casimir_core::Error::Numeric { .. }) => 3,
            _ => 2,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "casimir",
    version,
    about = "Dispersion (Casimir/van der Waals) forces between real-material bodies"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Casimir pressure between parallel plates at one (z, T) point.
    Pressure {
        #[command(flatten)]
        mat: MaterialOpts,
        #[command(flatten)]
        point: PointOpts,
        /// Roughness profile `offset_nm:weight,...` (zero mean); adds a
        /// roughness-averaged pressure column.
        #[arg(long, allow_hyphen_values = true)]
        roughness: Option<String>,
        #[command(flatten)]
        io: IoOpts,
    },
    /// Free energy per unit area at one (z, T) point.
    FreeEnergy {
        #[command(flatten)]
        mat: MaterialOpts,
        #[command(flatten)]
        point: PointOpts,
        #[command(flatten)]
        io: IoOpts,
    },
    /// Fluctuating-field entropy S = -dF/dT at one (z, T) point.
    Entropy {
        #[command(flatten)]
        mat: MaterialOpts,
        #[command(flatten)]
        point: PointOpts,
        #[command(flatten)]
        io: IoOpts,
    },
    /// The l = 0 (classical) pressure term, split by polarization.
    Classical {
        #[command(flatten)]
        mat: MaterialOpts,
        #[command(flatten)]
        point: PointOpts,
        #[command(flatten)]
        io: IoOpts,
    },
    /// Sweep a quantity over separation or temperature.
    Sweep {
        /// One of: pressure, free-energy, entropy, classical.
        #[arg(long)]
        quantity: String,
        /// `z=<min>:<max>:<n>[:lin|:log]` (nm) or `T=<min>:<max>:<n>[:lin|:log]` (K).
        #[arg(long)]
        sweep: String,
        #[command(flatten)]
        mat: MaterialOpts,
        #[command(flatten)]
        point: PointOpts,
        #[command(flatten)]
        io: IoOpts,
    },
    /// Sphere-plate force via the proximity force approximation.
    Force {
        /// Sphere radius (µm).
        #[arg(long = "radius-um")]
        radius_um: f64,
        #[command(flatten)]
        mat: MaterialOpts,
        #[command(flatten)]
        point: PointOpts,
        #[command(flatten)]
        io: IoOpts,
    },
    /// Potential landscape and equilibria of the Casimir oscillator.
    Oscillator {
        /// Hooke constant (N/m).
        #[arg(long)]
        stiffness: f64,
        /// Unperturbed separation (nm).
        #[arg(long = "z0-nm")]
        z0_nm: f64,
        /// Sphere radius (µm).
        #[arg(long = "radius-um")]
        radius_um: f64,
        /// Effective mass (kg).
        #[arg(long = "mass-kg")]
        mass_kg: f64,
        /// Shift grid `<min>:<max>:<n>` (nm, linear).
        #[arg(long = "shift-grid")]
        shift_grid: String,
        #[command(flatten)]
        mat: MaterialOpts,
        #[command(flatten)]
        point: PointOpts,
        #[command(flatten)]
        io: IoOpts,
    },
    /// Yukawa exclusion curve alpha_max(lambda) from an experiment band.
    Constrain {
        /// Band CSV with header `z_nm,delta_mPa`.
        #[arg(long)]
        band: PathBuf,
        /// Plate 1 layers `density:thickness_nm,...,density:inf`.
        #[arg(long)]
        layers: String,
        /// Plate 2 layers (defaults to plate 1).
        #[arg(long)]
        layers2: Option<String>,
        /// Lambda grid `<min>:<max>:<n>[:lin|:log]` (m).
        #[arg(long)]
        lambda: String,
        #[command(flatten)]
        io: IoOpts,
    },
    /// Kramers-Kronig transform of an optical table onto the imaginary axis.
    Kk {
        /// Optical table CSV (`omega_rad_s,im_eps` or `energy_ev,im_eps`).
        #[arg(long = "optical-table")]
        optical_table: PathBuf,
        /// Low-frequency extension (none | drude:<wp_eV>,<g_eV> | plasma:<wp_eV>).
        #[arg(long = "table-extension")]
        table_extension: Option<String>,
        /// Imaginary-frequency grid `<min>:<max>:<n>[:lin|:log]` (eV).
        #[arg(long)]
        xi: String,
        #[command(flatten)]
        io: IoOpts,
    },
}

#[derive(Args, Debug, Clone)]
struct MaterialOpts {
    /// ideal | gold-plasma | gold-drude | gold-impedance | plasma:<wp_eV> |
    /// drude:<wp_eV>,<gamma_eV> | impedance:<wp_eV> | table
    #[arg(long)]
    material: Option<String>,
    /// Second plate material (defaults to the first).
    #[arg(long)]
    material2: Option<String>,
    /// Optical table CSV for `--material table`.
    #[arg(long = "optical-table")]
    optical_table: Option<PathBuf>,
    /// Optical table CSV for `--material2 table`.
    #[arg(long = "optical-table2")]
    optical_table2: Option<PathBuf>,
    /// Low-frequency extension for `--material table`.
    #[arg(long = "table-extension")]
    table_extension: Option<String>,
    /// Low-frequency extension for `--material2 table`.
    #[arg(long = "table-extension2")]
    table_extension2: Option<String>,
    /// Zero-frequency treatment: schwinger | drude | plasma | impedance-ir |
    /// impedance-skin.
    #[arg(long)]
    prescription: Option<String>,
}

#[derive(Args, Debug, Clone)]
struct PointOpts {
    /// Plate separation (nm).
    #[arg(long = "z-nm")]
    z_nm: Option<f64>,
    /// Temperature (K); 0 selects the zero-temperature integral.
    #[arg(long = "T")]
    temperature: Option<f64>,
}

#[derive(Args, Debug, Clone)]
struct IoOpts {
    /// TOML file of default values for material/prescription/z_nm/T/format;
    /// explicit flags win.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output path (stdout when omitted); written atomically.
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv | json
    #[arg(long)]
    format: Option<String>,
}

/// Defaults loadable from `--config <toml>`.
#[derive(Deserialize, Debug, Default, Clone)]
#[serde(deny_unknown_fields)]
struct FileDefaults {
    material: Option<String>,
    material2: Option<String>,
    prescription: Option<String>,
    z_nm: Option<f64>,
    #[serde(rename = "T")]
    temperature: Option<f64>,
    format: Option<String>,
}

impl FileDefaults {
    fn load(path: Option<&Path>) -> CliResult<Self> {
        let Some(path) = path else {
            return Ok(FileDefaults::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
    }
}

/// Fully resolved plate-pair inputs plus the canonical echo string.
struct ResolvedPlates {
    plates_at: Box<dyn Fn(f64) -> casimir_core::Result<PlateConfig> + Sync>,
    echo: String,
    notes: Vec<String>,
}

fn resolve_format(io: &IoOpts, file: &FileDefaults) -> CliResult<OutputFormat> {
    match io
        .format
        .as_deref()
        .or(file.format.as_deref())
        .unwrap_or("csv")
    {
        "csv" => Ok(OutputFormat::Csv),
        "json" => Ok(OutputFormat::Json),
        other => Err(CliError::Usage(format!(
            "unknown format '{other}' (expected csv or json)"
        ))),
    }
}

fn resolve_plates(mat: &MaterialOpts, file: &FileDefaults) -> CliResult<ResolvedPlates> {
    let spec1 = mat
        .material
        .clone()
        .or_else(|| file.material.clone())
        .ok_or_else(|| CliError::Usage("--material is required (or set it in --config)".into()))?;
    let spec2 = mat
        .material2
        .clone()
        .or_else(|| file.material2.clone())
        .unwrap_or_else(|| spec1.clone());
    let presc_name = mat
        .prescription
        .clone()
        .or_else(|| file.prescription.clone())
        .ok_or_else(|| {
            CliError::Usage("--prescription is required (or set it in --config)".into())
        })?;
    let prescription = parse::prescription(&presc_name)?;

    let ext1 = mat
        .table_extension
        .as_deref()
        .map(parse::table_extension)
        .transpose()?;
    let ext2 = mat
        .table_extension2
        .as_deref()
        .map(parse::table_extension)
        .transpose()?;
    let m1 = parse::material(&spec1, mat.optical_table.as_deref(), ext1.as_ref())?;
    let m2 = parse::material(&spec2, mat.optical_table2.as_deref(), ext2.as_ref())?;

    let mut notes = Vec::new();
    for (label, m) in [("material", &m1), ("material2", &m2)] {
        if let MaterialModel::Impedance { .. } = m {
            notes.push(format!(
                "{label}: Leontovich description; validity requires |Z| << 1 over contributing frequencies"
            ));
        }
    }

    let echo = format!(
        "material={spec1} material2={spec2} prescription={presc_name}{}{}",
        mat.optical_table
            .as_ref()
            .map(|p| format!(" optical_table={}", p.display()))
            .unwrap_or_default(),
        mat.table_extension
            .as_ref()
            .map(|e| format!(" table_extension={e}"))
            .unwrap_or_default(),
    );

    Ok(ResolvedPlates {
        plates_at: Box::new(move |z| PlateConfig::new(m1.clone(), m2.clone(), z, prescription)),
        echo,
        notes,
    })
}

struct Point {
    z_nm: f64,
    z: f64,
    temperature: f64,
}

fn resolve_point(point: &PointOpts, file: &FileDefaults) -> CliResult<Point> {
    let z_nm = point
        .z_nm
        .or(file.z_nm)
        .ok_or_else(|| CliError::Usage("--z-nm is required (or set z_nm in --config)".into()))?;
    let temperature = point
        .temperature
        .or(file.temperature)
        .ok_or_else(|| CliError::Usage("--T is required (or set T in --config)".into()))?;
    Ok(Point {
        z_nm,
        z: z_nm * 1e-9,
        temperature,
    })
}

fn thermal_state(t: f64) -> CliResult<ThermalState> {
    if t == 0.0 {
        Ok(ThermalState::zero())
    } else {
        Ok(ThermalState::new(t)?)
    }
}

fn deliver(curve: &CurveOutput, io: &IoOpts, format: OutputFormat) -> CliResult<()> {
    let bytes = curve.emit(format).map_err(CliError::Usage)?;
    match &io.out {
        Some(path) => write_atomic(path, &bytes)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(&bytes)
                .map_err(|e| CliError::Io(format!("cannot write to stdout: {e}")))
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let engine = Engine::default();
    match cli.command {
        Command::Pressure {
            mat,
            point,
            roughness,
            io,
        } => {
            let file = FileDefaults::load(io.config.as_deref())?;
            let format = resolve_format(&io, &file)?;
            let plates = resolve_plates(&mat, &file)?;
            let pt = resolve_point(&point, &file)?;
            let (z, t) = (pt.z, pt.temperature);
            let ts = thermal_state(t)?;
            let cfg = (plates.plates_at)(z)?;
            let p = engine.pressure(&cfg, &ts)?;

            let config = format!(
                "command=pressure {} z_nm={} T={t}{}",
                plates.echo,
                pt.z_nm,
                roughness
                    .as_ref()
                    .map(|r| format!(" roughness={r}"))
                    .unwrap_or_default()
            );
            let mut curve = CurveOutput::new(config, plates.notes.clone());
            curve.push("z", "m", vec![z]);
            curve.push("T", "K", vec![t]);
            curve.push("pressure", "Pa", vec![p]);
            if let Some(spec) = roughness {
                let profile = parse::roughness(&spec)?;
                let p_rough = rough_pressure(&engine, &cfg, &ts, &profile)?;
                curve.push("pressure_rough", "Pa", vec![p_rough]);
            }
            deliver(&curve, &io, format)
        }

        Command::FreeEnergy { mat, point, io } => {
            let file = FileDefaults::load(io.config.as_deref())?;
            let format = resolve_format(&io, &file)?;
            let plates = resolve_plates(&mat, &file)?;
            let pt = resolve_point(&point, &file)?;
            let (z, t) = (pt.z, pt.temperature);
            let result = engine.free_energy(&(plates.plates_at)(z)?, &thermal_state(t)?)?;

            let config = format!("command=free-energy {} z_nm={} T={t}", plates.echo, pt.z_nm);
            let mut notes = plates.notes.clone();
            notes.push(format!(
                "matsubara terms summed: {}",
                result.per_l_contributions.len()
            ));
            let mut curve = CurveOutput::new(config, notes);
            curve.push("z", "m", vec![z]);
            curve.push("T", "K", vec![t]);
            curve.push("free_energy", "J/m^2", vec![result.value]);
            curve.push(
                "truncation_estimate",
                "J/m^2",
                vec![result.truncation_estimate],
            );
            deliver(&curve, &io, format)
        }

        Command::Entropy { mat, point, io } => {
            let file = FileDefaults::load(io.config.as_deref())?;
            let format = resolve_format(&io, &file)?;
            let plates = resolve_plates(&mat, &file)?;
            let pt = resolve_point(&point, &file)?;
            let (z, t) = (pt.z, pt.temperature);
            let s = engine.entropy(&(plates.plates_at)(z)?, t)?;

            let config = format!("command=entropy {} z_nm={} T={t}", plates.echo, pt.z_nm);
            let mut curve = CurveOutput::new(config, plates.notes.clone());
            curve.push("z", "m", vec![z]);
            curve.push("T", "K", vec![t]);
            curve.push("entropy", "J/(K m^2)", vec![s]);
            deliver(&curve, &io, format)
        }

        Command::Classical { mat, point, io } => {
            let file = FileDefaults::load(io.config.as_deref())?;
            let format = resolve_format(&io, &file)?;
            let plates = resolve_plates(&mat, &file)?;
            let pt = resolve_point(&point, &file)?;
            let (z, t) = (pt.z, pt.temperature);
            let cfg = (plates.plates_at)(z)?;
            let (tm, te) = engine.classical_term_by_polarization(&cfg, &thermal_state(t)?)?;

            let config = format!("command=classical {} z_nm={} T={t}", plates.echo, pt.z_nm);
            let mut curve = CurveOutput::new(config, plates.notes.clone());
            curve.push("z", "m", vec![z]);
            curve.push("T", "K", vec![t]);
            curve.push("classical_pressure", "Pa", vec![tm + te]);
            curve.push("classical_tm", "Pa", vec![tm]);
            curve.push("classical_te", "Pa", vec![te]);
            deliver(&curve, &io, format)
        }

        Command::Sweep {
            quantity,
            sweep,
            mat,
            point,
            io,
        } => {
            let file = FileDefaults::load(io.config.as_deref())?;
            let format = resolve_format(&io, &file)?;
            let plates = resolve_plates(&mat, &file)?;
            run_sweep(
                &engine, &quantity, &sweep, plates, &point, &file, &io, format,
            )
        }

        Command::Force {
            radius_um,
            mat,
            point,
            io,
        } => {
            let file = FileDefaults::load(io.config.as_deref())?;
            let format = resolve_format(&io, &file)?;
            let plates = resolve_plates(&mat, &file)?;
            let pt = resolve_point(&point, &file)?;
            let (z, t) = (pt.z, pt.temperature);
            let radius = radius_um * 1e-6;
            let sphere = SphereConfig::new(radius, z)?;
            let result = pfa_sphere_force(
                &engine,
                &sphere,
                &(plates.plates_at)(z)?,
                &thermal_state(t)?,
            )?;

            let mut notes = plates.notes.clone();
            if !sphere.within_recommended_validity() {
                let warning = format!(
                    "z/R = {:.3} is above 0.1; PFA error bound is loose",
                    sphere.aspect()
                );
                eprintln!("warning: {warning}");
                notes.push(warning);
            }
            let config = format!(
                "command=force {} radius_um={radius_um} z_nm={} T={t}",
                plates.echo, pt.z_nm
            );
            let mut curve = CurveOutput::new(config, notes);
            curve.push("radius", "m", vec![radius]);
            curve.push("z", "m", vec![z]);
            curve.push("T", "K", vec![t]);
            curve.push("force", "N", vec![result.force]);
            curve.push("pfa_error_bound", "1", vec![result.error_bound]);
            deliver(&curve, &io, format)
        }

        Command::Oscillator {
            stiffness,
            z0_nm,
            radius_um,
            mass_kg,
            shift_grid,
            mat,
            point,
            io,
        } => {
            let file = FileDefaults::load(io.config.as_deref())?;
            let format = resolve_format(&io, &file)?;
            let plates = resolve_plates(&mat, &file)?;
            let t = point.temperature.or(file.temperature).unwrap_or(0.0);
            let grid = parse::grid(&ensure_linear(&shift_grid)?, "shift", 1e-9)?;
            let osc = OscillatorConfig {
                stiffness,
                rest_separation: z0_nm * 1e-9,
                sphere_radius: radius_um * 1e-6,
                effective_mass: mass_kg,
                plates: (plates.plates_at)(z0_nm * 1e-9)?,
                thermal: thermal_state(t)?,
            };
            let analysis = oscillator_analysis(&engine, &osc, &grid)?;

            let mut notes = plates.notes.clone();
            notes.push(format!("bistable: {}", analysis.bistable));
            if let Some(f) = analysis.local_minimum_frequency {
                notes.push(format!("local_minimum_frequency_rad_s: {f:.6e}"));
            }
            for e in &analysis.equilibria {
                notes.push(format!(
                    "equilibrium: shift={:.6e} m separation={:.6e} m kind={:?} curvature={}",
                    e.shift,
                    e.separation,
                    e.kind,
                    e.curvature
                        .map(|c| format!("{c:.6e} J/m^2"))
                        .unwrap_or_else(|| "-".into())
                ));
            }
            let config = format!(
                "command=oscillator {} stiffness={stiffness} z0_nm={z0_nm} radius_um={radius_um} mass_kg={mass_kg:e} shift_grid={shift_grid} T={t}",
                plates.echo
            );
            let mut curve = CurveOutput::new(config, notes);
            let (shifts, potentials): (Vec<f64>, Vec<f64>) =
                analysis.landscape.iter().copied().unzip();
            let separations: Vec<f64> = shifts.iter().map(|dz| z0_nm * 1e-9 - dz).collect();
            curve.push("shift", "m", shifts);
            curve.push("separation", "m", separations);
            curve.push("potential", "J", potentials);
            deliver(&curve, &io, format)
        }

        Command::Constrain {
            band,
            layers,
            layers2,
            lambda,
            io,
        } => {
            let file = FileDefaults::load(io.config.as_deref())?;
            let format = resolve_format(&io, &file)?;
            let text = std::fs::read_to_string(&band)
                .map_err(|e| CliError::Io(format!("cannot read band {}: {e}", band.display())))?;
            let band_data = ExperimentBand::from_csv_str(&text)?;
            let plate1 = parse::layers(&layers)?;
            let plate2 = match &layers2 {
                Some(spec) => parse::layers(spec)?,
                None => plate1.clone(),
            };
            let grid = parse::grid(&lambda, "lambda", 1.0)?;
            let curve_data = constrain(&band_data, &plate1, &plate2, &grid)?;

            let config = format!(
                "command=constrain band={} layers={layers} layers2={} lambda={lambda}",
                band.display(),
                layers2.as_deref().unwrap_or(&layers)
            );
            let mut curve = CurveOutput::new(config, Vec::new());
            curve.push(
                "lambda",
                "m",
                curve_data.points.iter().map(|p| p.lambda).collect(),
            );
            curve.push(
                "alpha_max",
                "1",
                curve_data.points.iter().map(|p| p.alpha_max).collect(),
            );
            curve.push(
                "z_star",
                "m",
                curve_data.points.iter().map(|p| p.z_star).collect(),
            );
            deliver(&curve, &io, format)
        }

        Command::Kk {
            optical_table,
            table_extension,
            xi,
            io,
        } => {
            let file = FileDefaults::load(io.config.as_deref())?;
            let format = resolve_format(&io, &file)?;
            let text = std::fs::read_to_string(&optical_table).map_err(|e| {
                CliError::Io(format!(
                    "cannot read table {}: {e}",
                    optical_table.display()
                ))
            })?;
            let table = casimir_core::OpticalTable::from_csv_str(&text)?;
            let extension = match &table_extension {
                Some(spec) => parse::table_extension(spec)?,
                None => LowFreqExtension::None,
            };
            // Grid in eV at the boundary, rad/s inside.
            let grid = parse::grid(
                &xi,
                "xi",
                casimir_core::constants::EV / casimir_core::constants::HBAR,
            )?;
            let points = kk_transform(&table, &grid, &extension)?;

            let config = format!(
                "command=kk optical_table={} table_extension={} xi={xi}",
                optical_table.display(),
                table_extension.as_deref().unwrap_or("none")
            );
            let mut curve = CurveOutput::new(config, Vec::new());
            curve.push("xi", "rad/s", points.iter().map(|p| p.0).collect());
            curve.push("eps", "1", points.iter().map(|p| p.1).collect());
            deliver(&curve, &io, format)
        }
    }
}

fn ensure_linear(spec: &str) -> CliResult<String> {
    match spec.split(':').count() {
        3 => Ok(format!("{spec}:lin")),
        4 if spec.ends_with(":lin") => Ok(spec.to_string()),
        4 => Err(CliError::Usage(
            "oscillator shift grid must be linear (use :lin)".into(),
        )),
        _ => Err(CliError::Usage(format!(
            "shift grid '{spec}' must be <min>:<max>:<n>[:lin]"
        ))),
    }
}

#[allow(clippy::too_many_arguments)]
fn run_sweep(
    engine: &Engine,
    quantity: &str,
    sweep: &str,
    plates: ResolvedPlates,
    point: &PointOpts,
    file: &FileDefaults,
    io: &IoOpts,
    format: OutputFormat,
) -> CliResult<()> {
    let (var, grid_part) = sweep
        .split_once('=')
        .ok_or_else(|| CliError::Usage(format!("sweep '{sweep}' must be z=<grid> or T=<grid>")))?;

    enum SweepVar {
        Separation,
        Temperature,
    }
    let (sweep_var, grid) = match var {
        "z" => (SweepVar::Separation, parse::grid(grid_part, "z", 1e-9)?),
        "T" => (SweepVar::Temperature, parse::grid(grid_part, "T", 1.0)?),
        other => {
            return Err(CliError::Usage(format!(
                "sweep variable '{other}' must be z or T"
            )))
        }
    };

    // The non-swept variable still comes from the point options.
    let (fixed_z_nm, fixed_t) = match sweep_var {
        SweepVar::Separation => {
            let t = point
                .temperature
                .or(file.temperature)
                .ok_or_else(|| CliError::Usage("--T is required when sweeping z".into()))?;
            (f64::NAN, t)
        }
        SweepVar::Temperature => {
            let z_nm = point
                .z_nm
                .or(file.z_nm)
                .ok_or_else(|| CliError::Usage("--z-nm is required when sweeping T".into()))?;
            (z_nm, f64::NAN)
        }
    };
    let fixed_z = fixed_z_nm * 1e-9;

    enum Quantity {
        Pressure,
        FreeEnergy,
        Entropy,
        Classical,
    }
    let q = match quantity {
        "pressure" => Quantity::Pressure,
        "free-energy" => Quantity::FreeEnergy,
        "entropy" => Quantity::Entropy,
        "classical" => Quantity::Classical,
        other => {
            return Err(CliError::Usage(format!(
                "unknown sweep quantity '{other}' (pressure|free-energy|entropy|classical)"
            )))
        }
    };

    // One row per grid point, evaluated in parallel with a deterministic
    // result order.
    let rows: Result<Vec<(f64, f64, Vec<f64>)>, casimir_core::Error> = grid
        .points()
        .par_iter()
        .map(|&value| {
            let (z, t) = match sweep_var {
                SweepVar::Separation => (value, fixed_t),
                SweepVar::Temperature => (fixed_z, value),
            };
            let cfg = (plates.plates_at)(z)?;
            let ts = if t == 0.0 {
                ThermalState::zero()
            } else {
                ThermalState::new(t)?
            };
            let values = match q {
                Quantity::Pressure => vec![engine.pressure(&cfg, &ts)?],
                Quantity::FreeEnergy => {
                    let r = engine.free_energy(&cfg, &ts)?;
                    vec![r.value, r.truncation_estimate]
                }
                Quantity::Entropy => vec![engine.entropy(&cfg, t)?],
                Quantity::Classical => {
                    let (tm, te) = engine.classical_term_by_polarization(&cfg, &ts)?;
                    vec![tm + te, tm, te]
                }
            };
            Ok((z, t, values))
        })
        .collect();
    let rows = rows?;

    let config = format!(
        "command=sweep quantity={quantity} sweep={sweep} {} fixed_z_nm={} fixed_T={}",
        plates.echo,
        if fixed_z_nm.is_nan() {
            "-".to_string()
        } else {
            format!("{fixed_z_nm}")
        },
        if fixed_t.is_nan() {
            "-".to_string()
        } else {
            format!("{fixed_t}")
        }
    );
    let mut curve = CurveOutput::new(config, plates.notes);
    curve.push("z", "m", rows.iter().map(|r| r.0).collect());
    curve.push("T", "K", rows.iter().map(|r| r.1).collect());
    let labels: &[(&str, &str)] = match q {
        Quantity::Pressure => &[("pressure", "Pa")],
        Quantity::FreeEnergy => &[("free_energy", "J/m^2"), ("truncation_estimate", "J/m^2")],
        Quantity::Entropy => &[("entropy", "J/(K m^2)")],
        Quantity::Classical => &[
            ("classical_pressure", "Pa"),
            ("classical_tm", "Pa"),
            ("classical_te", "Pa"),
        ],
    };
    for (i, (name, unit)) in labels.iter().enumerate() {
        curve.push(name, unit, rows.iter().map(|r| r.2[i]).collect());
    }
    deliver(&curve, io, format)
}
