//! Curve containers and byte-stable CSV/JSON emission.
//!
//! CSV: `#`-prefixed metadata lines, a `name[unit]` header row, values in
//! scientific notation with 12 significant digits. JSON mirrors the columns
//! as arrays plus the metadata object. Both are deterministic for identical
//! runs; files are written atomically (temp file + rename).

use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::Path;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    pub constants_hash: String,
    /// Canonical echo of every resolved input, sufficient to reproduce the
    /// run bit-exactly.
    pub config: String,
    /// Free-form result annotations (equilibria, warnings made permanent).
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Column {
    pub name: String,
    pub unit: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CurveOutput {
    pub metadata: Metadata,
    pub columns: Vec<Column>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl CurveOutput {
    pub fn new(config: String, notes: Vec<String>) -> Self {
        CurveOutput {
            metadata: Metadata {
                tool: "casimir".into(),
                version: env!("CARGO_PKG_VERSION").into(),
                constants_hash: constants_hash(),
                config,
                notes,
            },
            columns: Vec::new(),
        }
    }

    pub fn push(&mut self, name: &str, unit: &str, values: Vec<f64>) {
        self.columns.push(Column {
            name: name.into(),
            unit: unit.into(),
            values,
        });
    }

    fn check_rectangular(&self) -> Result<usize, String> {
        let n = self.columns.first().map_or(0, |c| c.values.len());
        for c in &self.columns {
            if c.values.len() != n {
                return Err(format!(
                    "column '{}' has {} rows, expected {n}",
                    c.name,
                    c.values.len()
                ));
            }
        }
        Ok(n)
    }

    pub fn emit(&self, format: OutputFormat) -> Result<Vec<u8>, String> {
        let rows = self.check_rectangular()?;
        match format {
            OutputFormat::Json => {
                let mut bytes = serde_json::to_vec(self).map_err(|e| e.to_string())?;
                bytes.push(b'\n');
                Ok(bytes)
            }
            OutputFormat::Csv => {
                let mut out = String::new();
                out.push_str(&format!(
                    "# {} {}\n# constants_hash = {}\n# config: {}\n",
                    self.metadata.tool,
                    self.metadata.version,
                    self.metadata.constants_hash,
                    self.metadata.config
                ));
                for note in &self.metadata.notes {
                    out.push_str(&format!("# note: {note}\n"));
                }
                let header: Vec<String> = self
                    .columns
                    .iter()
                    .map(|c| format!("{}[{}]", c.name, c.unit))
                    .collect();
                out.push_str(&header.join(","));
                out.push('\n');
                for i in 0..rows {
                    let row: Vec<String> = self
                        .columns
                        .iter()
                        .map(|c| format!("{:.11e}", c.values[i]))
                        .collect();
                    out.push_str(&row.join(","));
                    out.push('\n');
                }
                Ok(out.into_bytes())
            }
        }
    }
}

/// FNV-1a over the exact decimal expansions of the physical constants;
/// pins outputs to the constant set that produced them.
pub fn constants_hash() -> String {
    use casimir_core::constants::{C, EV, G, HBAR, K_B, ZETA_3};
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for v in [HBAR, C, K_B, G, ZETA_3, EV] {
        for b in format!("{v:.17e};").bytes() {
            hash ^= u64::from(b);
            hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    format!("{hash:016x}")
}

/// Write through a sibling temp file and rename into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let tmp = path.with_extension("tmp-write");
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> CurveOutput {
        let mut c = CurveOutput::new("command=test".into(), vec!["note a".into()]);
        c.push("z", "m", vec![1e-7, 2e-7]);
        c.push("pressure", "Pa", vec![-13.0, -0.8125]);
        c
    }

    #[test]
    fn csv_shape_and_digits() {
        let bytes = sample().emit(OutputFormat::Csv).unwrap();
        let text = String::from_utf8(bytes).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# casimir"));
        assert!(lines[2].starts_with("# config: command=test"));
        assert_eq!(lines[3], "# note: note a");
        assert_eq!(lines[4], "z[m],pressure[Pa]");
        assert_eq!(lines[5], "1.00000000000e-7,-1.30000000000e1");
        assert_eq!(lines.len(), 7);
    }

    #[test]
    fn emission_is_deterministic() {
        let a = sample().emit(OutputFormat::Csv).unwrap();
        let b = sample().emit(OutputFormat::Csv).unwrap();
        assert_eq!(a, b);
        let a = sample().emit(OutputFormat::Json).unwrap();
        let b = sample().emit(OutputFormat::Json).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn json_round_trip_is_byte_identical() {
        let bytes = sample().emit(OutputFormat::Json).unwrap();
        let parsed: CurveOutput = serde_json::from_slice(&bytes).unwrap();
        let again = parsed.emit(OutputFormat::Json).unwrap();
        assert_eq!(bytes, again);
    }

    #[test]
    fn ragged_columns_rejected() {
        let mut c = sample();
        c.push("bad", "1", vec![1.0]);
        assert!(c.emit(OutputFormat::Csv).is_err());
    }
}
