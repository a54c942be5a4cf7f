//! Empirical Korovkin-type convergence checks for sequences of operators.
//!
//! Uniform convergence on a compact set is proxied by the sup norm over a
//! uniform grid. Verdicts are qualitative: an error ladder must not grow
//! and must end below a threshold.

mod continuity;
mod properties;
mod samples;
mod separating;
mod suite;

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::capacity::Capacity;
use crate::choquet::QuadratureConfig;
use crate::error::{Error, Result};
use crate::func::{Func, Monotonicity};
use crate::operators::{
    Approximator, CoefficientCache, OperatorFamily, OperatorInstance, OperatorParam,
};

pub use continuity::{absolute_continuity_pair, ContinuityCertificate};
pub use properties::{
    verify_properties, AxiomCheck, Check, Counterexample, PropertyConfig, PropertyReport,
    HOMOGENEITY_SCALES,
};
pub use samples::{PiecewiseLinear, Shape};
pub use separating::{
    check_separating_condition, SeparatingFunction, SeparatingReport, SeparatingRow,
};
pub use suite::{
    run_korovkin_suite, ConvergenceReport, ErrorPoint, FunctionSeries, SuiteConfig, Verdict,
};

/// Default grid cells per axis in one dimension.
pub const DEFAULT_CELLS_1D: usize = 512;
/// Default grid cells per axis in two or more dimensions.
pub const DEFAULT_CELLS_ND: usize = 128;
/// Errors at or below this are treated as zero when comparing rungs.
pub const ERROR_FLOOR: f64 = 1e-9;

/// Builds the `n`-th member of an operator sequence.
pub type Builder<'a> = dyn Fn(usize) -> Result<Arc<dyn Approximator>> + Send + Sync + 'a;

/// A function with a display name.
#[derive(Debug, Clone)]
pub struct TestFunction {
    pub name: String,
    pub func: Func,
}

impl TestFunction {
    pub fn new(name: impl Into<String>, func: Func) -> Self {
        Self {
            name: name.into(),
            func,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WindowShape {
    Box,
    /// `{x ≥ 0, Σx ≤ 1}`; `lo`/`hi` are the bounding box.
    Simplex,
}

/// A compact window with a uniform grid of `cells` cells per axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompactWindow {
    pub shape: WindowShape,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub cells: usize,
}

impl CompactWindow {
    pub fn interval(a: f64, b: f64) -> Result<Self> {
        Self::boxed(vec![a], vec![b])
    }

    pub fn boxed(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(Error::usage(
                "window bounds must be non-empty and of equal length",
            ));
        }
        if lo
            .iter()
            .zip(&hi)
            .any(|(a, b)| !(a.is_finite() && b.is_finite() && a < b))
        {
            return Err(Error::usage(format!("invalid window {lo:?} x {hi:?}")));
        }
        let cells = if lo.len() == 1 {
            DEFAULT_CELLS_1D
        } else {
            DEFAULT_CELLS_ND
        };
        Ok(Self {
            shape: WindowShape::Box,
            lo,
            hi,
            cells,
        })
    }

    /// The standard simplex in `dim` dimensions.
    pub fn simplex(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::usage("simplex dimension must be positive"));
        }
        Ok(Self {
            shape: WindowShape::Simplex,
            lo: vec![0.0; dim],
            hi: vec![1.0; dim],
            cells: if dim == 1 {
                DEFAULT_CELLS_1D
            } else {
                DEFAULT_CELLS_ND
            },
        })
    }

    pub fn with_cells(mut self, cells: usize) -> Result<Self> {
        if cells == 0 {
            return Err(Error::usage("grid needs at least one cell per axis"));
        }
        self.cells = cells;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn in_positive_cone(&self) -> bool {
        self.lo.iter().all(|&a| a >= 0.0)
    }

    /// Grid points in lexicographic order (first axis slowest).
    pub fn points(&self) -> Vec<Vec<f64>> {
        let dim = self.dim();
        let m = self.cells;
        let coord = |axis: usize, i: usize| {
            if i == m {
                self.hi[axis]
            } else {
                self.lo[axis] + (self.hi[axis] - self.lo[axis]) * i as f64 / m as f64
            }
        };
        let mut out = Vec::new();
        let mut idx = vec![0usize; dim];
        loop {
            let keep = match self.shape {
                WindowShape::Box => true,
                WindowShape::Simplex => idx.iter().sum::<usize>() <= m,
            };
            if keep {
                out.push((0..dim).map(|a| coord(a, idx[a])).collect());
            }
            let mut axis = dim;
            loop {
                if axis == 0 {
                    return out;
                }
                axis -= 1;
                if idx[axis] < m {
                    idx[axis] += 1;
                    break;
                }
                idx[axis] = 0;
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TestSetVariant {
    /// `e₀, ±pr_k, Σpr_k²`
    Full,
    /// `e₀, −pr_k, Σpr_k²`, valid on the positive cone.
    Reduced,
}

impl std::str::FromStr for TestSetVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Self::Full),
            "reduced" => Ok(Self::Reduced),
            _ => Err(Error::usage(format!(
                "unknown test set '{s}'; valid: full, reduced"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestFunctionSet {
    pub dim: usize,
    pub variant: TestSetVariant,
}

impl TestFunctionSet {
    pub fn new(dim: usize, variant: TestSetVariant) -> Self {
        Self { dim, variant }
    }

    /// The functions, named `e0`, `e1`/`-e1`, `e2` in one dimension and
    /// `e0`, `pr{k}`/`-pr{k}`, `e{N+1}` otherwise.
    pub fn functions(&self, window: &CompactWindow) -> Result<Vec<TestFunction>> {
        let dim = self.dim;
        if window.dim() != dim {
            return Err(Error::usage(format!(
                "test set of dimension {dim} on a {}-D window",
                window.dim()
            )));
        }
        if self.variant == TestSetVariant::Reduced && !window.in_positive_cone() {
            return Err(Error::usage(
                "the reduced test set needs a window in the positive cone",
            ));
        }
        let coord = |k: usize| {
            if dim == 1 {
                "e1".to_string()
            } else {
                format!("pr{}", k + 1)
            }
        };
        let mut out = vec![TestFunction::new(
            "e0",
            Func::constant(dim, 1.0).with_label("e0"),
        )];
        if self.variant == TestSetVariant::Full {
            for k in 0..dim {
                out.push(TestFunction::new(
                    coord(k),
                    Func::projection(dim, k).with_label(coord(k)),
                ));
            }
        }
        for k in 0..dim {
            let name = format!("-{}", coord(k));
            out.push(TestFunction::new(
                name.clone(),
                Func::projection(dim, k).scaled(-1.0).with_label(name),
            ));
        }
        let name = format!("e{}", dim + 1);
        let mut sq =
            Func::multivariate(dim, |x| x.iter().map(|v| v * v).sum()).with_label(name.clone());
        if dim == 1 && window.in_positive_cone() {
            sq = sq.with_hint(Monotonicity::Nondecreasing);
        }
        out.push(TestFunction::new(name, sq));
        Ok(out)
    }
}

/// Sup-norm error `max_x |T(f)(x) − f(x)|` over a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupError {
    pub sup_error: f64,
    /// Largest evaluation error estimate over the grid.
    pub error_bound: f64,
    pub at: Vec<f64>,
}

pub fn sup_error(op: &dyn Approximator, f: &Func, window: &CompactWindow) -> Result<SupError> {
    sup_error_at(op, f, &window.points())
}

pub(crate) fn sup_error_at(
    op: &dyn Approximator,
    f: &Func,
    points: &[Vec<f64>],
) -> Result<SupError> {
    let values = op.evaluate_many(f, points)?;
    let diffs: Vec<f64> = points
        .par_iter()
        .zip(&values)
        .map(|(x, e)| (e.value - f.at(x)).abs())
        .collect();
    let mut best = SupError {
        sup_error: 0.0,
        error_bound: 0.0,
        at: points[0].clone(),
    };
    for ((x, e), d) in points.iter().zip(&values).zip(diffs) {
        if !d.is_finite() {
            return Err(Error::domain(format!("f or T(f) is not finite at {x:?}")));
        }
        if d > best.sup_error {
            best.sup_error = d;
            best.at = x.clone();
        }
        best.error_bound = best.error_bound.max(e.error);
    }
    Ok(best)
}

/// Builder for a family sharing one coefficient cache across `n`.
/// Bandwidth families use `h = 1/n`.
pub fn family_builder(
    family: OperatorFamily,
    capacity: Option<Capacity>,
    quadrature: QuadratureConfig,
) -> impl Fn(usize) -> Result<Arc<dyn Approximator>> + Send + Sync {
    let cache = Arc::new(CoefficientCache::new());
    move |n| {
        let param = if family.uses_bandwidth() {
            OperatorParam::Bandwidth(1.0 / n as f64)
        } else {
            OperatorParam::Degree(n)
        };
        let inst = OperatorInstance::new(family, param, capacity.clone())?
            .with_quadrature(quadrature)?
            .with_cache(Arc::clone(&cache));
        Ok(Arc::new(inst) as Arc<dyn Approximator>)
    }
}

/// Checks every grid point lies in the operator domain.
pub(crate) fn check_window(op: &dyn Approximator, window: &CompactWindow) -> Result<()> {
    if op.dim() != window.dim() {
        return Err(Error::usage(format!(
            "{} acts on {} variables but the window has {}",
            op.name(),
            op.dim(),
            window.dim()
        )));
    }
    let outside = window.points().into_iter().find(|x| !op.contains(x));
    match outside {
        Some(x) => Err(Error::domain(format!(
            "window point {x:?} lies outside the domain of {}",
            op.name()
        ))),
        None => Ok(()),
    }
}

/// Nonincreasing up to [`ERROR_FLOOR`].
pub(crate) fn nonincreasing(errors: &[f64]) -> bool {
    errors
        .windows(2)
        .all(|w| w[1] <= w[0] || w[1] <= ERROR_FLOOR)
}

pub(crate) fn strictly_decreasing(errors: &[f64]) -> bool {
    errors.windows(2).all(|w| w[1] < w[0])
}

/// `log(e_i/e_{i+1}) / log(n_{i+1}/n_i)`, i.e. `log₂(err(n)/err(2n))` on a
/// doubling ladder.
pub(crate) fn rates(ns: &[usize], errors: &[Option<f64>]) -> Vec<Option<f64>> {
    ns.windows(2)
        .zip(errors.windows(2))
        .map(|(n, e)| match (e[0], e[1]) {
            (Some(a), Some(b)) if a > 1e-15 && b > 1e-15 => {
                Some((a / b).ln() / (n[1] as f64 / n[0] as f64).ln())
            }
            _ => None,
        })
        .collect()
}
