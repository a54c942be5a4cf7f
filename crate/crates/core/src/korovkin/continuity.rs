use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::CompactWindow;
use crate::error::{Error, Result};
use crate::func::Func;

/// `|f(s) − f(t)| ≤ ε + δ‖s − t‖²` on every grid pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuityCertificate {
    pub epsilon: f64,
    /// Largest grid distance below which every pair differs by at most ε.
    pub delta_tilde: f64,
    /// `2·sup|f| / δ̃²`, or zero when the grid oscillation is at most ε.
    pub delta: f64,
    pub sup_abs: f64,
    pub pairs_checked: u64,
    /// Smallest `ε + δ‖s−t‖² − |f(s) − f(t)|` over the pairs.
    pub worst_margin: f64,
    pub holds: bool,
}

fn dist2(s: &[f64], t: &[f64]) -> f64 {
    s.iter().zip(t).map(|(a, b)| (a - b) * (a - b)).sum()
}

/// Reduces `op` over all unordered pairs `(i, j)`, `i < j`.
fn over_pairs<T>(
    n: usize,
    init: T,
    op: impl Fn(T, usize, usize) -> T + Sync,
    merge: impl Fn(T, T) -> T + Sync + Send,
) -> T
where
    T: Clone + Send + Sync,
{
    (0..n)
        .into_par_iter()
        .map(|i| ((i + 1)..n).fold(init.clone(), |acc, j| op(acc, i, j)))
        .reduce(|| init.clone(), merge)
}

/// The `ε`–`δ(ε)` estimate for `f` on the window grid, re-checked over
/// every pair of grid points.
pub fn absolute_continuity_pair(
    f: &Func,
    window: &CompactWindow,
    epsilon: f64,
) -> Result<ContinuityCertificate> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::usage(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    if f.dim() != window.dim() {
        return Err(Error::usage("function and window dimensions differ"));
    }
    let points = window.points();
    let values: Vec<f64> = points.par_iter().map(|x| f.at(x)).collect();
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::domain(format!("f is not finite at {:?}", points[i])));
    }
    let sup_abs = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let n = points.len();

    // Closest pair that differs by more than ε.
    let nearest_bad = over_pairs(
        n,
        f64::INFINITY,
        |acc, i, j| {
            if (values[i] - values[j]).abs() > epsilon {
                acc.min(dist2(&points[i], &points[j]))
            } else {
                acc
            }
        },
        f64::min,
    );
    let (delta_tilde, delta) = if nearest_bad.is_infinite() {
        let diameter = over_pairs(
            n,
            0.0,
            |acc, i, j| acc.max(dist2(&points[i], &points[j])),
            f64::max,
        );
        (diameter.sqrt(), 0.0)
    } else {
        let below = over_pairs(
            n,
            0.0,
            |acc, i, j| {
                let d = dist2(&points[i], &points[j]);
                if d < nearest_bad {
                    acc.max(d)
                } else {
                    acc
                }
            },
            f64::max,
        );
        if below == 0.0 {
            return Err(Error::domain(format!(
                "f varies by more than {epsilon} between neighbouring grid points; refine the grid"
            )));
        }
        (below.sqrt(), 2.0 * sup_abs / below)
    };

    let worst_margin = over_pairs(
        n,
        f64::INFINITY,
        |acc, i, j| {
            let margin =
                epsilon + delta * dist2(&points[i], &points[j]) - (values[i] - values[j]).abs();
            acc.min(margin)
        },
        f64::min,
    );
    Ok(ContinuityCertificate {
        epsilon,
        delta_tilde,
        delta,
        sup_abs,
        pairs_checked: (n as u64) * (n as u64 - 1) / 2,
        worst_margin: if n > 1 { worst_margin } else { epsilon },
        holds: n <= 1 || worst_margin >= 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> CompactWindow {
        CompactWindow::interval(0.0, 1.0).unwrap()
    }

    #[test]
    fn constant_needs_no_delta() {
        let c = absolute_continuity_pair(&Func::constant(1, 3.0), &unit(), 0.01).unwrap();
        assert_eq!(c.delta, 0.0);
        assert!(c.holds);
    }

    #[test]
    fn square_certificate() {
        let c = absolute_continuity_pair(&Func::unary(|t| t * t), &unit(), 0.1).unwrap();
        assert!(c.holds && c.delta > 0.0);
        assert_eq!(c.pairs_checked, 513 * 512 / 2);
    }

    #[test]
    fn abs_is_lipschitz() {
        let c = absolute_continuity_pair(&Func::unary(|t| (t - 0.5).abs()), &unit(), 0.05).unwrap();
        assert!(c.holds);
        assert!((c.delta_tilde - 0.05).abs() < 2.0 / 512.0, "{c:?}");
    }

    #[test]
    fn rejects_nonpositive_epsilon() {
        assert!(matches!(
            absolute_continuity_pair(&Func::unary(|t| t), &unit(), 0.0),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn too_coarse_a_grid_is_reported() {
        let w = unit().with_cells(4).unwrap();
        assert!(absolute_continuity_pair(&Func::unary(|t| 10.0 * t), &w, 0.1).is_err());
    }
}
