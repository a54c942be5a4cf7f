use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::suite::Verdict;
use super::{
    check_window, nonincreasing, strictly_decreasing, Builder, CompactWindow, TestFunction,
};
use crate::error::{Error, Result};
use crate::func::Func;

/// `γ(s,t) = Σ_k (f_k(s) − f_k(t))²` for a family `f_1..f_m`.
#[derive(Debug, Clone)]
pub struct SeparatingFunction {
    family: Arc<Vec<TestFunction>>,
    dim: usize,
}

impl SeparatingFunction {
    /// Built from the coordinate projections.
    pub fn coordinates(dim: usize) -> Self {
        let family = (0..dim)
            .map(|k| TestFunction::new(format!("pr{}", k + 1), Func::projection(dim, k)))
            .collect();
        Self {
            family: Arc::new(family),
            dim,
        }
    }

    pub fn from_family(family: Vec<TestFunction>) -> Result<Self> {
        let dim = family
            .first()
            .ok_or_else(|| Error::usage("empty separating family"))?
            .func
            .dim();
        if family.iter().any(|f| f.func.dim() != dim) {
            return Err(Error::usage("separating family mixes dimensions"));
        }
        Ok(Self {
            family: Arc::new(family),
            dim,
        })
    }

    pub fn names(&self) -> Vec<String> {
        self.family.iter().map(|f| f.name.clone()).collect()
    }

    pub fn gamma(&self, s: &[f64], t: &[f64]) -> f64 {
        self.family
            .iter()
            .map(|f| {
                let d = f.func.at(s) - f.func.at(t);
                d * d
            })
            .sum()
    }

    /// `s ↦ γ(s, t)`.
    pub fn section(&self, t: &[f64]) -> Func {
        let family = Arc::clone(&self.family);
        let at_t: Vec<f64> = family.iter().map(|f| f.func.at(t)).collect();
        Func::multivariate(self.dim, move |s| {
            family
                .iter()
                .zip(&at_t)
                .map(|(f, v)| {
                    let d = f.func.at(s) - v;
                    d * d
                })
                .sum()
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparatingRow {
    pub n: usize,
    /// `max_t T_n(γ(·,t))(t)` over the grid.
    pub max_value: Option<f64>,
    pub min_value: Option<f64>,
    pub at: Vec<f64>,
    pub error_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparatingReport {
    pub operators: Vec<String>,
    pub family: Vec<String>,
    pub window: CompactWindow,
    pub threshold: f64,
    /// No two distinct grid points have `γ = 0`.
    pub separates: bool,
    pub rows: Vec<SeparatingRow>,
    pub nonincreasing: bool,
    pub strictly_decreasing: bool,
    pub below_threshold: bool,
    pub verdict: Verdict,
}

/// Grid pairs compared by the separation spot check.
const SEPARATION_PAIRS: usize = 1 << 22;

fn separates(gamma: &SeparatingFunction, points: &[Vec<f64>]) -> bool {
    let stride = ((points.len() * points.len()) / SEPARATION_PAIRS).max(1);
    points.par_iter().enumerate().all(|(i, s)| {
        points
            .iter()
            .enumerate()
            .skip(i + 1)
            .step_by(stride)
            .all(|(_, t)| gamma.gamma(s, t) > 0.0)
    })
}

/// Measures `max_t T_n(γ(·,t))(t)` on the window grid for every rung.
pub fn check_separating_condition(
    build: &Builder<'_>,
    n_list: &[usize],
    gamma: &SeparatingFunction,
    window: &CompactWindow,
    threshold: f64,
) -> Result<SeparatingReport> {
    if n_list.is_empty() || n_list[0] == 0 || n_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::usage(format!(
            "n ladder must be positive and strictly increasing, got {n_list:?}"
        )));
    }
    if !(threshold > 0.0) {
        return Err(Error::usage("threshold must be positive"));
    }
    if gamma.dim != window.dim() {
        return Err(Error::usage(
            "separating family and window dimensions differ",
        ));
    }
    let ops = n_list
        .iter()
        .map(|&n| build(n))
        .collect::<Result<Vec<_>>>()?;
    for op in &ops {
        check_window(op.as_ref(), window)?;
    }
    let points = window.points();

    let mut rows = Vec::with_capacity(ops.len());
    for (op, &n) in ops.iter().zip(n_list) {
        let values: Vec<Result<_>> = points
            .par_iter()
            .map(|t| op.evaluate(&gamma.section(t), t))
            .collect();
        let mut row = SeparatingRow {
            n,
            max_value: None,
            min_value: None,
            at: points[0].clone(),
            error_bound: None,
            failure: None,
        };
        let (mut max, mut min, mut err) = (f64::NEG_INFINITY, f64::INFINITY, 0.0f64);
        for (t, v) in points.iter().zip(values) {
            match v {
                Ok(e) => {
                    if e.value > max {
                        max = e.value;
                        row.at = t.clone();
                    }
                    min = min.min(e.value);
                    err = err.max(e.error);
                }
                Err(e) if e.is_convergence() => {
                    row.failure.get_or_insert_with(|| format!("at {t:?}: {e}"));
                }
                Err(e) => return Err(e),
            }
        }
        if row.failure.is_none() {
            row.max_value = Some(max);
            row.min_value = Some(min);
            row.error_bound = Some(err);
        }
        rows.push(row);
    }

    let maxima: Option<Vec<f64>> = rows.iter().map(|r| r.max_value).collect();
    let (noninc, strict, below) = match &maxima {
        Some(v) => (
            nonincreasing(v),
            strictly_decreasing(v),
            v.last().is_some_and(|&e| e < threshold),
        ),
        None => (false, false, false),
    };
    Ok(SeparatingReport {
        operators: ops.iter().map(|o| o.name()).collect(),
        family: gamma.names(),
        window: window.clone(),
        threshold,
        separates: separates(gamma, &points),
        rows,
        nonincreasing: noninc,
        strictly_decreasing: strict,
        below_threshold: below,
        verdict: Verdict::from_bool(maxima.is_some() && noninc && below),
    })
}
