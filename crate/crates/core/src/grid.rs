//! Evaluation grids and shared numeric tolerances.

use crate::error::{Error, Result};

/// Spacing rule of a [`Grid`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridScale {
    Linear,
    Logarithmic,
}

/// Strictly increasing list of positive sample points (separations in m,
/// temperatures in K, frequencies in rad/s, ranges in m, ...).
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    points: Vec<f64>,
    scale: GridScale,
}

impl Grid {
    /// Wraps an explicit point list, enforcing the grid invariants.
    pub fn from_points(points: Vec<f64>, scale: GridScale) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::domain("grid must be nonempty"));
        }
        for (i, w) in points.windows(2).enumerate() {
            if !(w[0] < w[1]) {
                return Err(Error::domain(format!(
                    "grid points must be strictly increasing (points {} and {})",
                    i,
                    i + 1
                )));
            }
        }
        if !(points[0] > 0.0) {
            return Err(Error::domain("grid points must be positive"));
        }
        Ok(Grid { points, scale })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn scale(&self) -> GridScale {
        self.scale
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false // invariant: nonempty
    }

    pub fn first(&self) -> f64 {
        self.points[0]
    }

    pub fn last(&self) -> f64 {
        *self.points.last().expect("grid is nonempty")
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().copied()
    }
}

/// `n` points spanning `[min, max]` under the chosen scale, endpoints exact.
pub fn make_grid(min: f64, max: f64, n: usize, scale: GridScale) -> Result<Grid> {
    if !(min > 0.0) {
        return Err(Error::domain(format!(
            "grid min must be positive, got {min}"
        )));
    }
    if !(min < max) {
        return Err(Error::domain(format!(
            "grid requires min < max, got min={min}, max={max}"
        )));
    }
    if n < 2 {
        return Err(Error::domain(format!(
            "grid needs at least 2 points, got {n}"
        )));
    }
    let mut points = Vec::with_capacity(n);
    match scale {
        GridScale::Linear => {
            let step = (max - min) / (n - 1) as f64;
            for i in 0..n {
                points.push(min + step * i as f64);
            }
        }
        GridScale::Logarithmic => {
            let (lmin, lmax) = (min.ln(), max.ln());
            let step = (lmax - lmin) / (n - 1) as f64;
            for i in 0..n {
                points.push((lmin + step * i as f64).exp());
            }
        }
    }
    // Endpoints exact regardless of rounding in the interior.
    points[0] = min;
    points[n - 1] = max;
    Grid::from_points(points, scale)
}

/// Relative tolerances used across the engine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative tolerance for wavenumber/frequency quadrature.
    pub rel_quad: f64,
    /// Relative bound on the truncated Matsubara tail.
    pub rel_sum_tail: f64,
    /// Relative consistency requirement for numerical derivatives.
    pub rel_deriv: f64,
}

impl Tolerances {
    pub fn new(rel_quad: f64, rel_sum_tail: f64, rel_deriv: f64) -> Result<Self> {
        for (name, v) in [
            ("rel_quad", rel_quad),
            ("rel_sum_tail", rel_sum_tail),
            ("rel_deriv", rel_deriv),
        ] {
            if !(v > 0.0 && v <= 1e-2) {
                return Err(Error::domain(format!(
                    "tolerance {name} must lie in (0, 1e-2], got {v}"
                )));
            }
        }
        Ok(Tolerances {
            rel_quad,
            rel_sum_tail,
            rel_deriv,
        })
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rel_quad: 1e-9,
            rel_sum_tail: 1e-10,
            rel_deriv: 1e-6,
        }
    }
}
