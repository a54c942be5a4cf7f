use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A nondecreasing continuous map `u` with `u(0) = 0`, applied to a base
/// measure to obtain a distorted capacity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Distortion {
    /// `u(t) = t^alpha`, `alpha > 0`. Defined for every `t >= 0`, which is
    /// what allows the unnormalized `√𝓛` form on unbounded lines.
    Power { alpha: f64 },
    /// Node values at equally spaced abscissae `0, 1/k, ..., 1` with linear
    /// interpolation in between. Only defined on `[0, 1]`.
    Tabulated { values: Vec<f64> },
}

impl Distortion {
    pub fn power(alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::usage(format!(
                "power distortion needs alpha > 0, got {alpha}"
            )));
        }
        Ok(Distortion::Power { alpha })
    }

    /// The undistorted identity `u(t) = t`.
    pub fn identity() -> Self {
        Distortion::Power { alpha: 1.0 }
    }

    /// Tabulated distortion; rejects node lists that are not monotone or do
    /// not run from 0 to 1.
    pub fn tabulated(values: Vec<f64>) -> Result<Self> {
        let d = Self::tabulated_unchecked(values)?;
        if let Distortion::Tabulated { values } = &d {
            if values[0] != 0.0 || *values.last().unwrap() != 1.0 {
                return Err(Error::usage(
                    "tabulated distortion must satisfy u(0) = 0 and u(1) = 1",
                ));
            }
            if let Some(i) = values.windows(2).position(|w| w[1] < w[0]) {
                return Err(Error::usage(format!(
                    "tabulated distortion decreases between nodes {i} and {}",
                    i + 1
                )));
            }
        }
        Ok(d)
    }

    /// Tabulated distortion without the monotonicity and endpoint checks.
    /// Exists so that the capacity checkers can be exercised on corrupted
    /// inputs.
    pub fn tabulated_unchecked(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::usage(
                "tabulated distortion needs at least two nodes",
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::usage("tabulated distortion has a non-finite node"));
        }
        Ok(Distortion::Tabulated { values })
    }

    /// Largest argument the distortion accepts.
    pub fn max_argument(&self) -> f64 {
        match self {
            Distortion::Power { .. } => f64::INFINITY,
            Distortion::Tabulated { .. } => 1.0,
        }
    }

    pub fn apply(&self, t: f64) -> f64 {
        match self {
            Distortion::Power { alpha } => {
                if t <= 0.0 {
                    0.0
                } else if *alpha == 1.0 {
                    t
                } else if *alpha == 0.5 {
                    t.sqrt()
                } else {
                    t.powf(*alpha)
                }
            }
            Distortion::Tabulated { values } => {
                let k = values.len() - 1;
                let s = (t.clamp(0.0, 1.0)) * k as f64;
                let i = (s.floor() as usize).min(k - 1);
                let frac = s - i as f64;
                values[i] + frac * (values[i + 1] - values[i])
            }
        }
    }

    /// True when `u` is concave on its domain, which makes the distorted
    /// capacity submodular.
    pub fn is_concave(&self) -> bool {
        match self {
            Distortion::Power { alpha } => *alpha <= 1.0,
            Distortion::Tabulated { values } => values
                .windows(3)
                .all(|w| w[1] - w[0] >= w[2] - w[1] - 1e-15),
        }
    }

    /// Upper bound on `u(t + h) − u(t)` over `t >= 0` for a small `h`.
    pub fn increment_bound(&self, h: f64) -> f64 {
        match self {
            Distortion::Power { alpha } if *alpha < 1.0 => h.powf(*alpha),
            // Lipschitz beyond the origin; good enough for h << 1.
            Distortion::Power { alpha } => alpha * h,
            Distortion::Tabulated { values } => {
                let k = (values.len() - 1) as f64;
                let slope = values
                    .windows(2)
                    .map(|w| (w[1] - w[0]).abs() * k)
                    .fold(0.0, f64::max);
                slope * h
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_law_values() {
        let u = Distortion::power(0.5).unwrap();
        assert_eq!(u.apply(0.0), 0.0);
        assert_eq!(u.apply(0.25), 0.5);
        assert_eq!(u.apply(4.0), 2.0);
        assert!(Distortion::power(0.0).is_err());
        assert!(Distortion::power(-1.0).is_err());
    }

    #[test]
    fn tabulated_interpolates_linearly() {
        let u = Distortion::tabulated(vec![0.0, 0.6, 0.9, 1.0]).unwrap();
        assert_eq!(u.apply(0.0), 0.0);
        assert_eq!(u.apply(1.0), 1.0);
        assert!((u.apply(1.0 / 6.0) - 0.3).abs() < 1e-15);
        assert!((u.apply(0.5) - 0.75).abs() < 1e-15);
        assert!(u.is_concave());
    }

    #[test]
    fn tabulated_rejects_bad_nodes() {
        assert!(Distortion::tabulated(vec![0.0, 0.5, 0.4, 1.0]).is_err());
        assert!(Distortion::tabulated(vec![0.1, 1.0]).is_err());
        assert!(Distortion::tabulated(vec![0.0, 0.9]).is_err());
        assert!(Distortion::tabulated_unchecked(vec![0.0, 0.5, 0.4, 1.0]).is_ok());
    }

    #[test]
    fn concavity_classification() {
        assert!(Distortion::power(0.3).unwrap().is_concave());
        assert!(Distortion::identity().is_concave());
        assert!(!Distortion::power(2.0).unwrap().is_concave());
        assert!(!Distortion::tabulated(vec![0.0, 0.1, 1.0])
            .unwrap()
            .is_concave());
    }
}
