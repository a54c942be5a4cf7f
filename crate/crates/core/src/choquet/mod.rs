//! Choquet integrals `∫₀^∞ μ(f ≥ t) dt + ∫_{−∞}^0 [μ(f ≥ t) − μ(X)] dt`.
//!
//! Three routes are provided: exact layering for simple functions, closed
//! forms for the √𝓛 cell moments, and survival-function quadrature for
//! general bounded integrands in one dimension or on a simplex.

mod closed;
mod levels;
mod numeric;
mod simple;
mod simplex;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use closed::{choquet_moment_closed, MomentFunction};
pub use numeric::choquet_numeric;
pub use simple::{choquet_simple, SimpleFunction};
pub use simplex::choquet_simplex_power;

/// Tolerances and resolutions for numerical Choquet integration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum number of level-axis panels.
    pub max_subdivisions: usize,
    /// Uniform samples per window used to find monotone runs when no
    /// monotonicity hint is available.
    pub scan_resolution: usize,
    /// Extra level-axis break points per monotone run, taken at the values
    /// of `f` on a uniform grid of the run.
    pub level_breaks: usize,
    /// Cells per axis of the N-dimensional simplex grid (cell size `1/k`).
    pub grid_cells: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-9,
            rel_tol: 1e-8,
            max_subdivisions: 1 << 16,
            scan_resolution: 4096,
            level_breaks: 16,
            grid_cells: 128,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::usage("quadrature tolerances must be positive"));
        }
        if self.scan_resolution < 16 || self.grid_cells < 16 {
            return Err(Error::usage(
                "scan resolution and grid cells must be at least 16",
            ));
        }
        if self.level_breaks == 0 {
            return Err(Error::usage("level_breaks must be positive"));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::usage("max_subdivisions must be positive"));
        }
        Ok(())
    }
}

/// A Choquet integral estimate with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChoquetValue {
    pub value: f64,
    pub error: f64,
}

impl ChoquetValue {
    pub fn exact(value: f64) -> Self {
        Self { value, error: 0.0 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(QuadratureConfig::default().validate().is_ok());
        let bad = QuadratureConfig {
            scan_resolution: 8,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = QuadratureConfig {
            abs_tol: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }
}
