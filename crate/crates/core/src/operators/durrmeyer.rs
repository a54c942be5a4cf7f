//! `M_{n,μ}(f)(x) = B_n(f)(x) − f(x) + x_N^n [R_n(f) − f(0,…,0,1)]` with
//! `R_n(f) = (C)∫_{Δ_N} f·t_N^n dμ / (C)∫_{Δ_N} t_N^n dμ`.
//!
//! Evaluated literally; in particular constants are mapped to zero.

use rayon::prelude::*;

use super::cache::{CacheKey, SIMPLEX_MOMENT};
use super::{weights, Evaluation, OperatorFamily, OperatorInstance};
use crate::choquet::{choquet_simplex_power, ChoquetValue};
use crate::error::{Error, Result};
use crate::func::Func;

pub fn eval_durrmeyer_choquet(inst: &OperatorInstance, f: &Func, x: &[f64]) -> Result<Evaluation> {
    inst.expect_family(OperatorFamily::DurrmeyerChoquetSimplex)?;
    Ok(evaluate(inst, f, &[x.to_vec()])?.remove(0))
}

/// Multivariate Bernstein polynomial `Σ_{|α|≤n} f(α/n) p_α(x)` on `Δ_N`.
pub fn simplex_bernstein_polynomial(f: &Func, n: usize, x: &[f64]) -> f64 {
    weights::simplex_bernstein(n, x)
        .into_iter()
        .map(|(alpha, w)| {
            let node: Vec<f64> = alpha.iter().map(|&a| a as f64 / n as f64).collect();
            w * f.at(&node)
        })
        .sum()
}

fn moment(inst: &OperatorInstance, f: &Func, n: usize) -> Result<ChoquetValue> {
    let cap = inst.choquet_capacity();
    let power = u32::try_from(n).map_err(|_| Error::usage("degree too large"))?;
    let compute = || choquet_simplex_power(f, power, cap, inst.quadrature());
    match (inst.cache(), f.label()) {
        (Some(cache), Some(label)) => {
            let key = CacheKey::new(
                label,
                cap.to_string(),
                SIMPLEX_MOMENT,
                n as f64,
                0.0,
                inst.quadrature(),
            );
            cache.get_or_try_insert(key, compute)
        }
        _ => compute(),
    }
}

pub(crate) fn evaluate(
    inst: &OperatorInstance,
    f: &Func,
    points: &[Vec<f64>],
) -> Result<Vec<Evaluation>> {
    let n = inst.n();
    let dim = inst.capacity().map_or(1, |c| c.base().dim());
    let num = moment(inst, f, n)?;
    let den = moment(inst, &Func::constant(dim, 1.0), n)?;
    if !(den.value > 0.0) {
        return Err(Error::domain("simplex moment of t_N^n vanishes"));
    }
    let ratio = num.value / den.value;
    let ratio_err = num.error / den.value + num.value.abs() * den.error / (den.value * den.value);
    let mut vertex = vec![0.0; dim];
    vertex[dim - 1] = 1.0;
    let f_vertex = f.at(&vertex);
    points
        .par_iter()
        .map(|x| {
            let b = simplex_bernstein_polynomial(f, n, x);
            let xn = x[dim - 1].powi(n as i32);
            let value = b - f.at(x) + xn * (ratio - f_vertex);
            if !value.is_finite() {
                return Err(Error::usage(format!("f is not finite near {x:?}")));
            }
            Ok(Evaluation {
                value,
                error: xn * ratio_err,
            })
        })
        .collect()
}
