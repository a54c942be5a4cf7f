//! Linear baselines: Bernstein, Szász–Mirakjan (plain and Kantorovich),
//! Baskakov–Kantorovich and the Gauss–Weierstrass singular integral.

use std::f64::consts::PI;

use rayon::prelude::*;

use super::cache::{CacheKey, CELL_MEAN};
use super::kantorovich::{assemble, cell};
use super::{Evaluation, OperatorFamily, OperatorInstance};
use crate::choquet::ChoquetValue;
use crate::error::{Error, Result};
use crate::func::Func;
use crate::quadrature::{integrate, QuadOptions};

/// Gauss–Weierstrass kernel truncation in units of `h`.
pub const GAUSS_CUTOFF: f64 = 8.0;

/// `T(f)(x)` for any classical family.
pub fn eval_classical(inst: &OperatorInstance, f: &Func, x: f64) -> Result<Evaluation> {
    if inst.family().is_choquet() {
        return Err(Error::usage(format!(
            "{} is not a classical family",
            inst.family()
        )));
    }
    Ok(evaluate(inst, f, &[vec![x]])?.remove(0))
}

fn options(inst: &OperatorInstance) -> QuadOptions {
    let cfg = inst.quadrature();
    QuadOptions {
        abs_tol: cfg.abs_tol,
        rel_tol: cfg.rel_tol,
        max_panels: cfg.max_subdivisions,
    }
}

pub(crate) fn evaluate(
    inst: &OperatorInstance,
    f: &Func,
    points: &[Vec<f64>],
) -> Result<Vec<Evaluation>> {
    match inst.family() {
        OperatorFamily::ClassicalBernstein | OperatorFamily::ClassicalSzaszMirakjan => {
            let n = inst.n() as f64;
            assemble(inst, points, |k| {
                let v = f.at1(k as f64 / n);
                if v.is_finite() {
                    Ok(ChoquetValue::exact(v))
                } else {
                    Err(Error::usage(format!("f is not finite at {}", k as f64 / n)))
                }
            })
        }
        OperatorFamily::ClassicalSzaszKantorovich
        | OperatorFamily::ClassicalBaskakovKantorovich => {
            let n = inst.n();
            assemble(inst, points, |k| {
                let (l, r) = cell(k, n);
                lebesgue_mean(inst, f, l, r)
            })
        }
        OperatorFamily::GaussWeierstrass => points
            .par_iter()
            .map(|x| gauss_weierstrass(inst, f, x[0]))
            .collect(),
        other => Err(Error::usage(format!("{other} is not a classical family"))),
    }
}

/// `n ∫_l^r f` as a cell mean.
fn lebesgue_mean(inst: &OperatorInstance, f: &Func, l: f64, r: f64) -> Result<ChoquetValue> {
    if let Some(c) = f.constant_value() {
        return Ok(ChoquetValue::exact(c));
    }
    let compute = || {
        let q = integrate(|t| f.at1(t), &[l, r], options(inst))?;
        if !q.value.is_finite() {
            return Err(Error::usage(format!("f is not integrable on [{l}, {r}]")));
        }
        let w = r - l;
        Ok(ChoquetValue {
            value: q.value / w,
            error: q.error / w,
        })
    };
    match (inst.cache(), f.label()) {
        (Some(cache), Some(label)) => {
            let key = CacheKey::new(label, "lebesgue".into(), CELL_MEAN, l, r, inst.quadrature());
            cache.get_or_try_insert(key, compute)
        }
        _ => compute(),
    }
}

/// `W_h(f)(t) = (h√π)^{-1} ∫ f(s) e^{−(s−t)²/h²} ds` over `|s − t| ≤ 8h`.
fn gauss_weierstrass(inst: &OperatorInstance, f: &Func, t: f64) -> Result<Evaluation> {
    let h = inst.bandwidth().expect("bandwidth family");
    if let Some(c) = f.constant_value() {
        return Ok(Evaluation::exact(c));
    }
    let norm = 1.0 / (h * PI.sqrt());
    let reach = GAUSS_CUTOFF * h;
    let q = integrate(
        |s| {
            let z = (s - t) / h;
            f.at1(s) * (-z * z).exp()
        },
        &[t - reach, t, t + reach],
        options(inst),
    )?;
    if !q.value.is_finite() {
        return Err(Error::usage(format!("f is not integrable near {t}")));
    }
    Ok(Evaluation {
        value: norm * q.value,
        error: norm * q.error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{Approximator, OperatorParam};

    fn classical(family: OperatorFamily, n: usize) -> OperatorInstance {
        OperatorInstance::new(family, OperatorParam::Degree(n), None).unwrap()
    }

    fn sq() -> Func {
        Func::unary(|t| t * t)
    }

    #[test]
    fn bernstein_second_moment() {
        let inst = classical(OperatorFamily::ClassicalBernstein, 10);
        for x in [0.0, 0.25, 0.5, 1.0] {
            let v = eval_classical(&inst, &sq(), x).unwrap().value;
            assert!((v - (x * x + x * (1.0 - x) / 10.0)).abs() < 1e-14);
        }
    }

    #[test]
    fn szasz_mirakjan_second_moment() {
        let inst = classical(OperatorFamily::ClassicalSzaszMirakjan, 8);
        let v = eval_classical(&inst, &sq(), 1.5).unwrap().value;
        assert!((v - (2.25 + 1.5 / 8.0)).abs() < 1e-8);
    }

    #[test]
    fn szasz_kantorovich_moments() {
        // n∫ t² over cells gives x² + 2x/n + 1/(3n²).
        let inst = classical(OperatorFamily::ClassicalSzaszKantorovich, 8);
        let v = eval_classical(&inst, &sq(), 1.0).unwrap().value;
        assert!((v - (1.0 + 2.0 / 8.0 + 1.0 / 192.0)).abs() < 1e-9);
        let lin = eval_classical(&inst, &Func::unary(|t| t), 1.0)
            .unwrap()
            .value;
        assert!((lin - (1.0 + 1.0 / 16.0)).abs() < 1e-9);
    }

    #[test]
    fn baskakov_kantorovich_mean() {
        // Negative-binomial mean nx, so n∫ t over cells gives x + 1/(2n).
        let inst = classical(OperatorFamily::ClassicalBaskakovKantorovich, 8);
        let v = eval_classical(&inst, &Func::unary(|t| t), 0.7)
            .unwrap()
            .value;
        assert!((v - (0.7 + 1.0 / 16.0)).abs() < 1e-9);
    }

    #[test]
    fn gauss_weierstrass_moments() {
        let h = 0.3;
        let inst = OperatorInstance::new(
            OperatorFamily::GaussWeierstrass,
            OperatorParam::Bandwidth(h),
            None,
        )
        .unwrap();
        let one = Func::unary(|_| 1.0);
        for t in [-1.0, 0.0, 2.5] {
            assert!((inst.evaluate(&one, &[t]).unwrap().value - 1.0).abs() < 1e-12);
            let v = inst.evaluate(&sq(), &[t]).unwrap().value;
            assert!((v - (t * t + h * h / 2.0)).abs() < 1e-10);
        }
    }
}
