use std::cell::RefCell;

use super::levels::LevelSets;
use super::{ChoquetValue, QuadratureConfig};
use crate::capacity::{BaseMeasure, Capacity, IntervalSet};
use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadOptions};

/// Choquet integral of `f` over its window `W = [a, b]` with respect to
/// `μ_W`.
///
/// With `m ≤ f ≤ M` on `W` the value is `m·μ(W) + ∫_m^M μ({f ≥ t} ∩ W) dt`,
/// which equals the two-sided definition for either sign of `m`. The level
/// axis is integrated adaptively with break points at the levels where the
/// survival function can kink.
pub fn choquet_numeric(
    f: &crate::func::Integrand,
    cap: &Capacity,
    cfg: &QuadratureConfig,
) -> Result<ChoquetValue> {
    cfg.validate()?;
    let (a, b) = f.window();
    if !cap.covers_interval(a, b) {
        return Err(Error::domain(format!(
            "window [{a}, {b}] is outside the capacity domain"
        )));
    }
    let window = IntervalSet::interval(a, b)?;
    let mu_w = cap.measure_intervals(&window)?;

    if let BaseMeasure::Discrete { .. } = cap.base() {
        return discrete(f, cap, a, b).map(ChoquetValue::exact);
    }
    if let Some(c) = f.func().constant_value() {
        check_bounds(f, c, c)?;
        return Ok(ChoquetValue::exact(c * mu_w));
    }

    let levels = LevelSets::new(f.func(), a, b, cfg.scan_resolution, cfg.level_breaks)?;
    let (lo, hi) = (levels.min(), levels.max());
    check_bounds(f, lo, hi)?;
    if lo == hi {
        return Ok(ChoquetValue::exact(lo * mu_w));
    }

    let mut breaks = vec![lo];
    breaks.extend(
        levels
            .critical_levels()
            .into_iter()
            .filter(|&v| v > lo && v < hi),
    );
    breaks.push(hi);

    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let survival = |t: f64| match cap.measure_intervals(&levels.at_level(t)) {
        Ok(v) => v,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            0.0
        }
    };
    let opts = QuadOptions {
        abs_tol: cfg.abs_tol,
        rel_tol: cfg.rel_tol,
        max_panels: cfg.max_subdivisions,
    };
    let quad = integrate(survival, &breaks, opts);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    // Each boundary is located to about 1e-15 relative; a shift of δ moves
    // the survival by at most the distortion's modulus at δ.
    let xtol = 1e-15 * a.abs().max(b.abs()).max(b - a);
    let scale = if cap.is_normalized() {
        1.0 / cap.base().total_mass()
    } else {
        1.0
    };
    let level_err = (hi - lo)
        * cap
            .distortion()
            .increment_bound(scale * xtol * levels.boundary_count() as f64);
    match quad {
        Ok(q) => Ok(ChoquetValue {
            value: lo * mu_w + q.value,
            error: q.error + level_err,
        }),
        Err(Error::Convergence {
            message,
            estimate,
            error,
        }) => Err(Error::Convergence {
            message,
            estimate: lo * mu_w + estimate,
            error: error + level_err,
        }),
        Err(e) => Err(e),
    }
}

fn check_bounds(f: &crate::func::Integrand, lo: f64, hi: f64) -> Result<()> {
    if let Some((m, big_m)) = f.bounds() {
        let slack = 1e-12 * (m.abs().max(big_m.abs()).max(1.0));
        if lo < m - slack || hi > big_m + slack {
            return Err(Error::usage(format!(
                "integrand range [{lo}, {hi}] violates the declared bounds [{m}, {big_m}]"
            )));
        }
    }
    Ok(())
}

fn discrete(f: &crate::func::Integrand, cap: &Capacity, a: f64, b: f64) -> Result<f64> {
    let atoms = cap.base().atoms().unwrap_or_default();
    let inside: Vec<(f64, f64)> = atoms
        .iter()
        .filter(|(x, _)| *x >= a && *x <= b)
        .map(|&(x, _)| (f.at(x), x))
        .collect();
    if inside.iter().any(|(v, _)| !v.is_finite()) {
        return Err(Error::usage("integrand is not finite on an atom"));
    }
    // Layer over atom point sets so restrictions are honoured by `measure`.
    let mut order = inside;
    order.sort_by(|p, q| q.0.total_cmp(&p.0));
    let mut total = 0.0;
    let mut points = Vec::new();
    for i in 0..order.len() {
        points.push((order[i].1, order[i].1));
        let next = order.get(i + 1).map(|p| p.0);
        let step = match next {
            Some(v) if v == order[i].0 => continue,
            Some(v) => order[i].0 - v,
            None => order[i].0,
        };
        total += step * cap.measure_intervals(&IntervalSet::canonical(points.clone()))?;
    }
    Ok(total)
}

/// Exact Choquet integral of a function taking `values[i]` on disjoint
/// cells of base mass `weights[i]`; `distort` maps a base mass to `μ`.
pub(crate) fn layered_choquet(
    values: &[f64],
    weights: &[f64],
    distort: impl Fn(f64) -> Result<f64>,
) -> Result<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
    let mut mass = 0.0;
    let mut total = 0.0;
    for (pos, &i) in order.iter().enumerate() {
        mass += weights[i];
        let step = match order.get(pos + 1) {
            Some(&j) if values[j] == values[i] => continue,
            Some(&j) => values[i] - values[j],
            None => values[i],
        };
        if step != 0.0 {
            total += step * distort(mass)?;
        }
    }
    Ok(total)
}
