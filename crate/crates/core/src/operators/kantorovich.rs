//! `Σ_k [(C)∫_{cell_k} f dμ / μ(cell_k)] · p_k(x)` for the Bernstein,
//! Poisson and negative-binomial bases.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;

use super::cache::{CacheKey, CELL_MEAN};
use super::{weights, Evaluation, OperatorFamily, OperatorInstance};
use crate::capacity::IntervalSet;
use crate::choquet::{choquet_numeric, ChoquetValue};
use crate::error::{Error, Result};
use crate::func::{Func, Integrand};

/// `K_{n,μ}(f)(x)` with cells `[k/(n+1), (k+1)/(n+1)]`, `k = 0..n`.
pub fn eval_bernstein_kc(inst: &OperatorInstance, f: &Func, x: f64) -> Result<Evaluation> {
    inst.expect_family(OperatorFamily::BernsteinKc)?;
    Ok(evaluate(inst, f, &[vec![x]])?.remove(0))
}

/// `S_{n,μ}(f)(x)` with cells `[k/n, (k+1)/n]` and Poisson weights.
pub fn eval_szasz_kc(inst: &OperatorInstance, f: &Func, x: f64) -> Result<Evaluation> {
    inst.expect_family(OperatorFamily::SzaszKc)?;
    Ok(evaluate(inst, f, &[vec![x]])?.remove(0))
}

/// `V_{n,μ}(f)(x)` with cells `[k/n, (k+1)/n]` and negative-binomial weights.
pub fn eval_baskakov_kc(inst: &OperatorInstance, f: &Func, x: f64) -> Result<Evaluation> {
    inst.expect_family(OperatorFamily::BaskakovKc)?;
    Ok(evaluate(inst, f, &[vec![x]])?.remove(0))
}

/// Basis weights at `x` for a degree-indexed family.
pub(crate) fn basis(inst: &OperatorInstance, x: f64) -> Result<Vec<(usize, f64)>> {
    let n = inst.n();
    match inst.family() {
        OperatorFamily::BernsteinKc | OperatorFamily::ClassicalBernstein => {
            if !(0.0..=1.0).contains(&x) {
                return Err(Error::domain(format!("x = {x} outside [0, 1]")));
            }
            Ok(weights::bernstein(n, x))
        }
        OperatorFamily::SzaszKc
        | OperatorFamily::ClassicalSzaszMirakjan
        | OperatorFamily::ClassicalSzaszKantorovich => weights::poisson(n, x, inst.tail_bound()),
        OperatorFamily::BaskakovKc | OperatorFamily::ClassicalBaskakovKantorovich => {
            weights::baskakov(n, x, inst.tail_bound())
        }
        other => Err(Error::usage(format!("{other} has no discrete basis"))),
    }
}

/// Number of cells per unit length.
fn cells_per_unit(inst: &OperatorInstance) -> usize {
    match inst.family() {
        OperatorFamily::BernsteinKc => inst.n() + 1,
        _ => inst.n(),
    }
}

pub(crate) fn cell(k: usize, m: usize) -> (f64, f64) {
    (k as f64 / m as f64, (k + 1) as f64 / m as f64)
}

/// Weighted sum of per-cell coefficients, computing each needed
/// coefficient once.
pub(crate) fn assemble(
    inst: &OperatorInstance,
    points: &[Vec<f64>],
    coefficient: impl Fn(usize) -> Result<ChoquetValue> + Sync,
) -> Result<Vec<Evaluation>> {
    let bases: Vec<Vec<(usize, f64)>> = points
        .iter()
        .map(|x| basis(inst, x[0]))
        .collect::<Result<_>>()?;
    let needed: Vec<usize> = bases
        .iter()
        .flatten()
        .map(|&(k, _)| k)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let coefficients: HashMap<usize, ChoquetValue> = needed
        .par_iter()
        .map(|&k| coefficient(k).map(|c| (k, c)))
        .collect::<Result<_>>()?;
    let series = !matches!(
        inst.family(),
        OperatorFamily::BernsteinKc | OperatorFamily::ClassicalBernstein
    );
    Ok(bases
        .iter()
        .map(|basis| {
            let mut value = 0.0;
            let mut error = 0.0;
            let mut largest: f64 = 0.0;
            for &(k, w) in basis {
                let c = coefficients[&k];
                value += w * c.value;
                error += w * c.error;
                largest = largest.max(c.value.abs());
            }
            if series {
                error += inst.tail_bound() * largest;
            }
            Evaluation { value, error }
        })
        .collect())
}

pub(crate) fn evaluate(
    inst: &OperatorInstance,
    f: &Func,
    points: &[Vec<f64>],
) -> Result<Vec<Evaluation>> {
    let m = cells_per_unit(inst);
    assemble(inst, points, |k| {
        let (l, r) = cell(k, m);
        cell_mean(inst, f, l, r)
    })
}

/// `(C)∫_l^r f dμ / μ([l, r])`.
pub(crate) fn cell_mean(inst: &OperatorInstance, f: &Func, l: f64, r: f64) -> Result<ChoquetValue> {
    if let Some(c) = f.constant_value() {
        return Ok(ChoquetValue::exact(c));
    }
    let cap = inst.choquet_capacity();
    let compute = || {
        let mass = cap.measure_intervals(&IntervalSet::interval(l, r)?)?;
        if !(mass > 0.0) {
            return Err(Error::domain(format!("cell [{l}, {r}] has zero capacity")));
        }
        let v = choquet_numeric(&Integrand::new(f.clone(), l, r)?, cap, inst.quadrature())?;
        Ok(ChoquetValue {
            value: v.value / mass,
            error: v.error / mass,
        })
    };
    match (inst.cache(), f.label()) {
        (Some(cache), Some(label)) => {
            let key = CacheKey::new(label, cap.to_string(), CELL_MEAN, l, r, inst.quadrature());
            cache.get_or_try_insert(key, compute)
        }
        _ => compute(),
    }
}
