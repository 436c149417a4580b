//! Lifshitz-theory engine for dispersion (van der Waals/Casimir) forces
//! between real-material bodies.
//!
//! The crate evaluates the Lifshitz formula for parallel semispaces across
//! material models (ideal metal, plasma, Drude, Leontovich impedance,
//! tabulated optical data through the Kramers–Kronig transform), makes the
//! zero-frequency prescription an explicit, auditable choice, checks the
//! thermodynamic consistency of each model through the fluctuating-field
//! entropy, converts plate results to sphere geometry via the proximity
//! force approximation, and turns measured-vs-theory pressure bands into
//! exclusion curves for Yukawa-type new physics.
//!
//! Everything is SI internally; all evaluators are pure and safe to run
//! concurrently at distinct configuration points.

// Validation deliberately uses `!(v > 0.0)` and friends: the negated form
// rejects NaN, which the suggested `v <= 0.0` would silently accept.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constants;
pub mod error;
pub mod geometry;
pub mod grid;
pub mod lifshitz;
pub mod material;
mod quad;
pub mod reflection;
pub mod yukawa;

#[cfg(test)]
mod invariant_tests;

pub use error::{Error, Result};
pub use grid::{make_grid, Grid, GridScale, Tolerances};
pub use lifshitz::{Engine, FreeEnergyResult, PlateConfig, ThermalState};
pub use material::{LowFreqExtension, MaterialModel, OpticalTable};
pub use reflection::{ReflectionPair, WaveContext, ZeroFreqPrescription};
