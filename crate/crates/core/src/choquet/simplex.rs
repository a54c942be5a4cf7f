use std::collections::HashSet;
use std::sync::Arc;

use rayon::prelude::*;

use super::numeric::{choquet_numeric, layered_choquet};
use super::{ChoquetValue, QuadratureConfig};
use crate::capacity::{
    cap_volume, BaseMeasure, Capacity, CellGrid, GridMask, IntervalSet, Region, SimplexRegion,
};
use crate::error::{Error, Result};
use crate::func::{Func, Integrand, Monotonicity};
use crate::quadrature::{integrate, QuadOptions};

/// `(C)∫_{Δ_N} f(t)·t_N^n dμ` for a capacity over the simplex `Δ_N`.
///
/// Constant `f` uses the analytic cap volumes `(1−c)^N/N!`; in one
/// dimension the 1-D survival quadrature is used; otherwise the integrand
/// is sampled on the simplex grid and layered exactly, with the difference
/// to a grid of twice the cell size as error estimate.
pub fn choquet_simplex_power(
    f: &Func,
    power: u32,
    cap: &Capacity,
    cfg: &QuadratureConfig,
) -> Result<ChoquetValue> {
    cfg.validate()?;
    let dim = match cap.base() {
        BaseMeasure::LebesgueSimplex { dim } => *dim,
        _ => return Err(Error::domain("capacity does not live on a simplex")),
    };
    if f.dim() != dim {
        return Err(Error::domain(format!(
            "{}-variate function on a {dim}-simplex",
            f.dim()
        )));
    }
    let region = match cap.restriction() {
        None => None,
        Some(Region::Simplex(r)) => Some(r),
        Some(_) => {
            return Err(Error::domain(
                "simplex capacity restricted to a foreign region",
            ))
        }
    };
    let cap_level = match region {
        None => Some(0.0),
        Some(SimplexRegion::Cap { level, .. }) => Some(level.max(0.0)),
        Some(SimplexRegion::Mask(_)) => None,
    };
    match (f.constant_value(), cap_level) {
        (Some(c), Some(level)) => analytic(c, power, dim, level, cap, cfg),
        (_, Some(level)) if dim == 1 => one_dimensional(f, power, level, cap, cfg),
        _ => gridded(f, power, cap, region, cfg),
    }
}

/// `c·t_N^n` on the cap `{t_N ≥ ℓ}`: level sets are again caps.
///
/// The level axis is rescaled by `|c|` so that constants enter as exact
/// factors: `c·t_N^n` integrates to `c` times the value for `t_N^n`.
fn analytic(
    c: f64,
    power: u32,
    dim: usize,
    level: f64,
    cap: &Capacity,
    cfg: &QuadratureConfig,
) -> Result<ChoquetValue> {
    let total = cap.distort_mass(cap_volume(dim, level))?;
    if power == 0 || c == 0.0 {
        return Ok(ChoquetValue::exact(c * total));
    }
    let n = power as f64;
    let floor = level.powf(n);
    // Base mass of {σ ≤ t_N^n} or of its complement within the cap.
    let mass = |sigma: f64| {
        let above = cap_volume(dim, sigma.max(0.0).powf(1.0 / n).max(level));
        if c > 0.0 {
            above
        } else {
            (cap_volume(dim, level) - above).max(0.0)
        }
    };
    let opts = QuadOptions {
        abs_tol: cfg.abs_tol,
        rel_tol: cfg.rel_tol,
        max_panels: cfg.max_subdivisions,
    };
    let mut failure = None;
    let q = integrate(
        |sigma| match cap.distort_mass(mass(sigma)) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        },
        &[floor, 1.0],
        opts,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let combine = |integral: f64| {
        if c > 0.0 {
            c * (floor * total + integral)
        } else {
            c * total - c * integral
        }
    };
    match q {
        Ok(q) => Ok(ChoquetValue {
            value: combine(q.value),
            error: c.abs() * q.error,
        }),
        Err(Error::Convergence {
            message,
            estimate,
            error,
        }) => Err(Error::Convergence {
            message,
            estimate: combine(estimate),
            error: c.abs() * error,
        }),
        Err(e) => Err(e),
    }
}

/// `Δ_1 = [0, 1]`: reuse the interval integrator.
fn one_dimensional(
    f: &Func,
    power: u32,
    level: f64,
    cap: &Capacity,
    cfg: &QuadratureConfig,
) -> Result<ChoquetValue> {
    let base = BaseMeasure::lebesgue(0.0, 1.0)?;
    let mut line = if cap.is_normalized() {
        Capacity::normalized(base, cap.distortion().clone())?
    } else {
        Capacity::new(base, cap.distortion().clone())?
    };
    if level > 0.0 {
        line = line.restrict(IntervalSet::interval(level.min(1.0), 1.0)?)?;
    }
    let g = f.clone();
    let hint = match f.constant_value() {
        Some(c) if c >= 0.0 => Monotonicity::Nondecreasing,
        Some(_) => Monotonicity::Nonincreasing,
        None if power == 0 => f.hint(),
        None => Monotonicity::Unknown,
    };
    let h = Func::unary(move |t| g.at1(t) * t.powi(power as i32)).with_hint(hint);
    choquet_numeric(&Integrand::new(h, 0.0, 1.0)?, &line, cfg)
}

fn gridded(
    f: &Func,
    power: u32,
    cap: &Capacity,
    region: Option<&SimplexRegion>,
    cfg: &QuadratureConfig,
) -> Result<ChoquetValue> {
    let dim = f.dim();
    let fine_cells = match region {
        Some(SimplexRegion::Mask(m)) => m.grid().per_axis(),
        _ => cfg.grid_cells,
    };
    let fine = Arc::new(CellGrid::simplex(dim, fine_cells)?);
    let coarse = Arc::new(CellGrid::simplex(dim, (fine_cells / 2).max(1))?);
    let fine_mask = region.map(|r| r.to_mask(&fine)).transpose()?;
    let coarse_mask = match region {
        None => None,
        Some(SimplexRegion::Mask(_)) => {
            let m = fine_mask.as_ref().expect("mask built above");
            Some(coarsen(m, &coarse))
        }
        Some(r) => Some(r.to_mask(&coarse)?),
    };
    let value_h = sample(f, power, &fine, fine_mask.as_ref(), cap)?;
    let value_2h = sample(f, power, &coarse, coarse_mask.as_ref(), cap)?;
    Ok(ChoquetValue {
        value: value_h,
        error: (value_h - value_2h).abs(),
    })
}

/// Mask on `coarse` keeping the cells whose point falls in a kept fine cell.
fn coarsen(mask: &GridMask, coarse: &Arc<CellGrid>) -> GridMask {
    let grid = mask.grid();
    let m = grid.per_axis() as f64;
    let key = |p: &[f64]| -> Vec<usize> {
        p.iter()
            .map(|x| ((x * m).floor().max(0.0)) as usize)
            .collect()
    };
    let kept: HashSet<Vec<usize>> = (0..grid.len())
        .filter(|&i| mask.included()[i])
        .map(|i| key(grid.point(i)))
        .collect();
    GridMask::from_predicate(Arc::clone(coarse), |p| kept.contains(&key(p)))
}

fn sample(
    f: &Func,
    power: u32,
    grid: &CellGrid,
    mask: Option<&GridMask>,
    cap: &Capacity,
) -> Result<f64> {
    let dim = grid.dim();
    let values: Vec<f64> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let p = grid.point(i);
            f.at(p) * p[dim - 1].powi(power as i32)
        })
        .collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::usage("integrand is not finite on the simplex"));
    }
    let weights: Vec<f64> = match mask {
        None => grid.weights().to_vec(),
        Some(m) => grid
            .weights()
            .iter()
            .zip(m.included())
            .map(|(w, &keep)| if keep { *w } else { 0.0 })
            .collect(),
    };
    layered_choquet(&values, &weights, |mass| cap.distort_mass(mass))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tight() -> QuadratureConfig {
        QuadratureConfig {
            abs_tol: 1e-13,
            rel_tol: 1e-12,
            ..Default::default()
        }
    }

    #[test]
    fn constant_one_dim_one_power_one() {
        let cap = Capacity::sqrt_lebesgue_simplex(1).unwrap();
        let v = choquet_simplex_power(&Func::constant(1, 1.0), 1, &cap, &tight()).unwrap();
        assert!((v.value - 2.0 / 3.0).abs() < 1e-10, "{v:?}");
    }

    #[test]
    fn constant_dim_two_power_two() {
        let cap = Capacity::sqrt_lebesgue_simplex(2).unwrap();
        let v = choquet_simplex_power(&Func::constant(2, 1.0), 2, &cap, &tight()).unwrap();
        let expected = 1.0 / (3.0 * 2f64.sqrt());
        assert!((v.value - expected).abs() < 1e-10, "{v:?}");
    }

    #[test]
    fn zero_function() {
        let cap = Capacity::sqrt_lebesgue_simplex(3).unwrap();
        let v = choquet_simplex_power(&Func::constant(3, 0.0), 4, &cap, &tight()).unwrap();
        assert_eq!(v.value, 0.0);
    }

    #[test]
    fn negative_constant_matches_reflection() {
        // −t_N^n: survival on (−1, 0] is μ({t_N ≤ s^{1/n}}).
        let cap = Capacity::sqrt_lebesgue_simplex(2).unwrap();
        let v = choquet_simplex_power(&Func::constant(2, -1.0), 1, &cap, &tight()).unwrap();
        let grid = choquet_simplex_power(
            &Func::projection(2, 1).scaled(-1.0).without_label(),
            0,
            &cap,
            &tight(),
        )
        .unwrap();
        assert!((v.value - grid.value).abs() < 2e-3, "{v:?} vs {grid:?}");
    }

    #[test]
    fn grid_path_agrees_with_analytic_path() {
        let cap = Capacity::sqrt_lebesgue_simplex(2).unwrap();
        let exact = choquet_simplex_power(&Func::constant(2, 1.0), 2, &cap, &tight()).unwrap();
        let one = Func::multivariate(2, |_| 1.0);
        let grid = choquet_simplex_power(&one, 2, &cap, &tight()).unwrap();
        assert!(
            (grid.value - exact.value).abs() < 5e-3,
            "{grid:?} vs {exact:?}"
        );
        assert!(grid.error < 1e-2);
    }

    #[test]
    fn cap_restriction_shrinks_total() {
        let cap = Capacity::sqrt_lebesgue_simplex(2)
            .unwrap()
            .restrict(SimplexRegion::cap(2, 0.5))
            .unwrap();
        let v = choquet_simplex_power(&Func::constant(2, 1.0), 0, &cap, &tight()).unwrap();
        assert!((v.value - (0.125f64).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn wrong_base_is_a_domain_error() {
        let cap = Capacity::sqrt_lebesgue(0.0, 1.0).unwrap();
        assert!(matches!(
            choquet_simplex_power(&Func::constant(1, 1.0), 1, &cap, &tight()),
            Err(Error::Domain(_))
        ));
        let cap = Capacity::sqrt_lebesgue_simplex(2).unwrap();
        assert!(choquet_simplex_power(&Func::constant(3, 1.0), 1, &cap, &tight()).is_err());
    }
}
