//! Real-valued function handles shared by the integrators, the operators
//! and the convergence harness.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

type Eval = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Monotonicity promise for a function of one variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Monotonicity {
    Nondecreasing,
    Nonincreasing,
    #[default]
    Unknown,
}

impl Monotonicity {
    pub fn reversed(self) -> Self {
        match self {
            Monotonicity::Nondecreasing => Monotonicity::Nonincreasing,
            Monotonicity::Nonincreasing => Monotonicity::Nondecreasing,
            Monotonicity::Unknown => Monotonicity::Unknown,
        }
    }

    /// Hint of `f + g` given the hints of `f` and `g`.
    pub fn combine(self, other: Self) -> Self {
        if self == other {
            self
        } else {
            Monotonicity::Unknown
        }
    }
}

/// A cheaply clonable function `ℝ^dim → ℝ`.
///
/// The optional label identifies the function for coefficient caching;
/// two handles with the same label must compute the same values.
#[derive(Clone)]
pub struct Func {
    dim: usize,
    eval: Eval,
    hint: Monotonicity,
    label: Option<Arc<str>>,
    constant: Option<f64>,
}

impl fmt::Debug for Func {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Func")
            .field("dim", &self.dim)
            .field("label", &self.label)
            .field("hint", &self.hint)
            .field("constant", &self.constant)
            .finish()
    }
}

impl Func {
    /// A function of one variable.
    pub fn unary(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            dim: 1,
            eval: Arc::new(move |x: &[f64]| f(x[0])),
            hint: Monotonicity::Unknown,
            label: None,
            constant: None,
        }
    }

    /// A function of `dim` variables.
    pub fn multivariate(dim: usize, f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            dim,
            eval: Arc::new(f),
            hint: Monotonicity::Unknown,
            label: None,
            constant: None,
        }
    }

    pub fn constant(dim: usize, c: f64) -> Self {
        Self {
            dim,
            eval: Arc::new(move |_: &[f64]| c),
            hint: Monotonicity::Unknown,
            label: Some(format!("const({c})").into()),
            constant: Some(c),
        }
    }

    /// Coordinate projection `x ↦ x_k` (zero based).
    pub fn projection(dim: usize, k: usize) -> Self {
        Self::multivariate(dim, move |x| x[k])
            .with_hint(Monotonicity::Nondecreasing)
            .with_label(format!("pr{}", k + 1))
    }

    pub fn with_hint(mut self, hint: Monotonicity) -> Self {
        self.hint = hint;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into().into());
        self
    }

    pub fn without_label(mut self) -> Self {
        self.label = None;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hint(&self) -> Monotonicity {
        self.hint
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// `Some(c)` when the function is known to be identically `c`.
    pub fn constant_value(&self) -> Option<f64> {
        self.constant
    }

    #[inline]
    pub fn at(&self, x: &[f64]) -> f64 {
        (self.eval)(x)
    }

    #[inline]
    pub fn at1(&self, t: f64) -> f64 {
        (self.eval)(&[t])
    }

    fn derived_label(&self, other: Option<&Func>, op: &str) -> Option<Arc<str>> {
        match other {
            None => self.label.as_ref().map(|a| format!("{op}({a})").into()),
            Some(g) => match (&self.label, &g.label) {
                (Some(a), Some(b)) => Some(format!("{op}({a},{b})").into()),
                _ => None,
            },
        }
    }

    pub fn scaled(&self, a: f64) -> Func {
        if a == 0.0 {
            return Func::constant(self.dim, 0.0);
        }
        let f = self.eval.clone();
        Func {
            dim: self.dim,
            eval: Arc::new(move |x: &[f64]| a * f(x)),
            hint: if a > 0.0 {
                self.hint
            } else {
                self.hint.reversed()
            },
            label: self.derived_label(None, &format!("scale[{a}]")),
            constant: self.constant.map(|c| a * c),
        }
    }

    pub fn shifted(&self, c: f64) -> Func {
        let f = self.eval.clone();
        Func {
            dim: self.dim,
            eval: Arc::new(move |x: &[f64]| f(x) + c),
            hint: self.hint,
            label: self.derived_label(None, &format!("shift[{c}]")),
            constant: self.constant.map(|v| v + c),
        }
    }

    pub fn add(&self, other: &Func) -> Func {
        let (f, g) = (self.eval.clone(), other.eval.clone());
        Func {
            dim: self.dim,
            eval: Arc::new(move |x: &[f64]| f(x) + g(x)),
            hint: self.hint.combine(other.hint),
            label: self.derived_label(Some(other), "add"),
            constant: self.constant.zip(other.constant).map(|(a, b)| a + b),
        }
    }

    pub fn sub(&self, other: &Func) -> Func {
        self.add(&other.scaled(-1.0))
            .relabel(self.derived_label(Some(other), "sub"))
    }

    pub fn abs(&self) -> Func {
        let f = self.eval.clone();
        Func {
            dim: self.dim,
            eval: Arc::new(move |x: &[f64]| f(x).abs()),
            hint: Monotonicity::Unknown,
            label: self.derived_label(None, "abs"),
            constant: self.constant.map(f64::abs),
        }
    }

    pub fn max(&self, other: &Func) -> Func {
        let (f, g) = (self.eval.clone(), other.eval.clone());
        Func {
            dim: self.dim,
            eval: Arc::new(move |x: &[f64]| f(x).max(g(x))),
            hint: self.hint.combine(other.hint),
            label: self.derived_label(Some(other), "max"),
            constant: None,
        }
    }

    pub fn min(&self, other: &Func) -> Func {
        let (f, g) = (self.eval.clone(), other.eval.clone());
        Func {
            dim: self.dim,
            eval: Arc::new(move |x: &[f64]| f(x).min(g(x))),
            hint: self.hint.combine(other.hint),
            label: self.derived_label(Some(other), "min"),
            constant: None,
        }
    }

    fn relabel(mut self, label: Option<Arc<str>>) -> Func {
        self.label = label;
        self
    }
}

/// A function of one variable paired with the window it is integrated over.
#[derive(Debug, Clone)]
pub struct Integrand {
    func: Func,
    window: (f64, f64),
    bounds: Option<(f64, f64)>,
}

impl Integrand {
    pub fn new(func: Func, a: f64, b: f64) -> Result<Self> {
        if func.dim() != 1 {
            return Err(Error::usage("integrand must be a function of one variable"));
        }
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::usage(format!(
                "invalid integration window [{a}, {b}]"
            )));
        }
        Ok(Self {
            func,
            window: (a, b),
            bounds: None,
        })
    }

    /// Declares `m <= f <= M` on the window; the integrator spot-checks it.
    pub fn with_bounds(mut self, m: f64, big_m: f64) -> Result<Self> {
        if !(m <= big_m) {
            return Err(Error::usage(format!("invalid bounds [{m}, {big_m}]")));
        }
        self.bounds = Some((m, big_m));
        Ok(self)
    }

    pub fn with_hint(mut self, hint: Monotonicity) -> Self {
        self.func = self.func.with_hint(hint);
        self
    }

    pub fn func(&self) -> &Func {
        &self.func
    }

    pub fn window(&self) -> (f64, f64) {
        self.window
    }

    pub fn bounds(&self) -> Option<(f64, f64)> {
        self.bounds
    }

    pub fn hint(&self) -> Monotonicity {
        self.func.hint()
    }

    #[inline]
    pub fn at(&self, t: f64) -> f64 {
        self.func.at1(t)
    }
}
