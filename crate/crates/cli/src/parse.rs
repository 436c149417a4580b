//! Parsers for the compact command-line value syntaxes.
//!
//! Boundary units follow the conventions of the underlying experiments:
//! separations in nm, temperatures in K, energies (plasma/relaxation
//! frequencies, photon energies) in eV, densities in kg/m³, Yukawa ranges in
//! m. Everything is converted to SI on the way in.

use casimir_core::constants::ev_to_angular_frequency;
use casimir_core::geometry::RoughnessProfile;
use casimir_core::yukawa::{Layer, LayeredPlate};
use casimir_core::{
    make_grid, Grid, GridScale, LowFreqExtension, MaterialModel, OpticalTable, ZeroFreqPrescription,
};

use std::path::Path;

pub type ParseResult<T> = Result<T, String>;

/// `schwinger | drude | plasma | impedance-ir | impedance-skin`
pub fn prescription(s: &str) -> ParseResult<ZeroFreqPrescription> {
    match s {
        "schwinger" => Ok(ZeroFreqPrescription::SchwingerIdeal),
        "drude" => Ok(ZeroFreqPrescription::Drude),
        "plasma" => Ok(ZeroFreqPrescription::Plasma),
        "impedance-ir" => Ok(ZeroFreqPrescription::ImpedanceIr),
        "impedance-skin" => Ok(ZeroFreqPrescription::ImpedanceSkin),
        other => Err(format!(
            "unknown prescription '{other}' (expected schwinger|drude|plasma|impedance-ir|impedance-skin)"
        )),
    }
}

/// `none | drude:<wp_eV>,<gamma_eV> | plasma:<wp_eV>`
pub fn table_extension(s: &str) -> ParseResult<LowFreqExtension> {
    if s == "none" {
        return Ok(LowFreqExtension::None);
    }
    if let Some(rest) = s.strip_prefix("drude:") {
        let (wp, gamma) = split_pair(rest, "drude extension")?;
        return Ok(LowFreqExtension::Drude {
            omega_p: ev_to_angular_frequency(wp),
            gamma: ev_to_angular_frequency(gamma),
        });
    }
    if let Some(rest) = s.strip_prefix("plasma:") {
        let wp: f64 = parse_num(rest, "plasma extension omega_p")?;
        return Ok(LowFreqExtension::Plasma {
            omega_p: ev_to_angular_frequency(wp),
        });
    }
    Err(format!(
        "unknown table extension '{s}' (expected none, drude:<wp_eV>,<gamma_eV>, or plasma:<wp_eV>)"
    ))
}

/// Material spec:
/// `ideal | gold-plasma | gold-drude | gold-impedance |
///  plasma:<wp_eV> | drude:<wp_eV>,<gamma_eV> | impedance:<wp_eV> | table`.
/// `table` reads the optical-table CSV at `table_path` with `extension`.
pub fn material(
    spec: &str,
    table_path: Option<&Path>,
    extension: Option<&LowFreqExtension>,
) -> ParseResult<MaterialModel> {
    match spec {
        "ideal" => Ok(MaterialModel::IdealMetal),
        "gold-plasma" => Ok(MaterialModel::gold_plasma()),
        "gold-drude" => Ok(MaterialModel::gold_drude()),
        "gold-impedance" => Ok(MaterialModel::gold_impedance()),
        "table" => {
            let path = table_path
                .ok_or_else(|| "material 'table' needs --optical-table <csv>".to_string())?;
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read optical table {}: {e}", path.display()))?;
            let table = OpticalTable::from_csv_str(&text).map_err(|e| e.to_string())?;
            let ext = extension.cloned().unwrap_or(LowFreqExtension::None);
            MaterialModel::tabulated(table, ext).map_err(|e| e.to_string())
        }
        other => {
            if let Some(rest) = other.strip_prefix("plasma:") {
                let wp: f64 = parse_num(rest, "plasma omega_p")?;
                return MaterialModel::plasma(ev_to_angular_frequency(wp))
                    .map_err(|e| e.to_string());
            }
            if let Some(rest) = other.strip_prefix("drude:") {
                let (wp, gamma) = split_pair(rest, "drude material")?;
                return MaterialModel::drude(
                    ev_to_angular_frequency(wp),
                    ev_to_angular_frequency(gamma),
                )
                .map_err(|e| e.to_string());
            }
            if let Some(rest) = other.strip_prefix("impedance:") {
                let wp: f64 = parse_num(rest, "impedance omega_p")?;
                return MaterialModel::impedance(ev_to_angular_frequency(wp))
                    .map_err(|e| e.to_string());
            }
            Err(format!("unknown material '{other}'"))
        }
    }
}

/// Grid spec `<min>:<max>:<n>[:lin|:log]` (defaults to log spacing).
pub fn grid_spec(s: &str, what: &str) -> ParseResult<(f64, f64, usize, GridScale)> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 && parts.len() != 4 {
        return Err(format!(
            "{what} grid '{s}' must be <min>:<max>:<n>[:lin|:log]"
        ));
    }
    let min = parse_num(parts[0], "grid min")?;
    let max = parse_num(parts[1], "grid max")?;
    let n: usize = parts[2]
        .parse()
        .map_err(|_| format!("grid point count '{}' is not an integer", parts[2]))?;
    let scale = match parts.get(3).copied().unwrap_or("log") {
        "lin" => GridScale::Linear,
        "log" => GridScale::Logarithmic,
        other => return Err(format!("grid scale '{other}' must be lin or log")),
    };
    Ok((min, max, n, scale))
}

/// Grid spec with a unit scale applied to min/max (e.g. nm → m).
pub fn grid(s: &str, what: &str, unit_scale: f64) -> ParseResult<Grid> {
    let (min, max, n, scale) = grid_spec(s, what)?;
    make_grid(min * unit_scale, max * unit_scale, n, scale).map_err(|e| e.to_string())
}

/// Layer stack `density:thickness_nm,...,density:inf` (substrate last).
pub fn layers(s: &str) -> ParseResult<LayeredPlate> {
    let mut list = Vec::new();
    for (i, part) in s.split(',').enumerate() {
        let (density_str, thickness_str) = part
            .split_once(':')
            .ok_or_else(|| format!("layer {i} '{part}' must be <density>:<thickness_nm|inf>"))?;
        let density = parse_num(density_str, "layer density")?;
        if thickness_str == "inf" {
            list.push(Layer::substrate(density));
        } else {
            let thickness_nm: f64 = parse_num(thickness_str, "layer thickness")?;
            list.push(Layer::coating(thickness_nm * 1e-9, density));
        }
    }
    LayeredPlate::new(list).map_err(|e| e.to_string())
}

/// Roughness profile `offset_nm:weight,...` (zero mean, weights sum to 1).
pub fn roughness(s: &str) -> ParseResult<RoughnessProfile> {
    let mut offsets = Vec::new();
    let mut weights = Vec::new();
    for (i, part) in s.split(',').enumerate() {
        let (h, w) = part
            .split_once(':')
            .ok_or_else(|| format!("roughness point {i} '{part}' must be <offset_nm>:<weight>"))?;
        offsets.push(parse_num::<f64>(h, "roughness offset")? * 1e-9);
        weights.push(parse_num(w, "roughness weight")?);
    }
    RoughnessProfile::new(offsets, weights).map_err(|e| e.to_string())
}

fn parse_num<T: std::str::FromStr>(s: &str, what: &str) -> ParseResult<T> {
    s.trim()
        .parse()
        .map_err(|_| format!("{what}: cannot parse '{s}' as a number"))
}

fn split_pair(s: &str, what: &str) -> ParseResult<(f64, f64)> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("{what} needs two comma-separated numbers, got '{s}'"))?;
    Ok((parse_num(a, what)?, parse_num(b, what)?))
}
