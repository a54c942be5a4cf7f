//! Kantorovich–Choquet operators, the simplex Durrmeyer–Choquet operator
//! and the classical linear operators they generalize.
//!
//! All operators are pointwise evaluators. [`Approximator::evaluate_many`]
//! shares coefficients (cell means, simplex moments) between the points of
//! one call; a [`CoefficientCache`] shares them between calls.

mod axioms;
mod cache;
mod classical;
mod durrmeyer;
mod kantorovich;
pub mod weights;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::capacity::{BaseMeasure, Capacity};
use crate::choquet::{ChoquetValue, QuadratureConfig};
use crate::error::{Error, Result};
use crate::func::Func;

pub use axioms::{operator_axioms, Axiom, AxiomSet};
pub use cache::CoefficientCache;
pub use classical::eval_classical;
pub use durrmeyer::{eval_durrmeyer_choquet, simplex_bernstein_polynomial};
pub use kantorovich::{eval_baskakov_kc, eval_bernstein_kc, eval_szasz_kc};

/// Value of `T(f)(x)` with an error estimate covering coefficient
/// quadrature and series truncation.
pub type Evaluation = ChoquetValue;

/// Default tail-mass bound for the infinite series.
pub const DEFAULT_TAIL_BOUND: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OperatorFamily {
    BernsteinKc,
    SzaszKc,
    BaskakovKc,
    DurrmeyerChoquetSimplex,
    ClassicalBernstein,
    ClassicalSzaszMirakjan,
    ClassicalSzaszKantorovich,
    ClassicalBaskakovKantorovich,
    GaussWeierstrass,
}

impl OperatorFamily {
    pub const ALL: [OperatorFamily; 9] = [
        OperatorFamily::BernsteinKc,
        OperatorFamily::SzaszKc,
        OperatorFamily::BaskakovKc,
        OperatorFamily::DurrmeyerChoquetSimplex,
        OperatorFamily::ClassicalBernstein,
        OperatorFamily::ClassicalSzaszMirakjan,
        OperatorFamily::ClassicalSzaszKantorovich,
        OperatorFamily::ClassicalBaskakovKantorovich,
        OperatorFamily::GaussWeierstrass,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            OperatorFamily::BernsteinKc => "bernstein-kc",
            OperatorFamily::SzaszKc => "szasz-kc",
            OperatorFamily::BaskakovKc => "baskakov-kc",
            OperatorFamily::DurrmeyerChoquetSimplex => "durrmeyer-choquet-simplex",
            OperatorFamily::ClassicalBernstein => "classical-bernstein",
            OperatorFamily::ClassicalSzaszMirakjan => "classical-szasz-mirakjan",
            OperatorFamily::ClassicalSzaszKantorovich => "classical-szasz-kantorovich",
            OperatorFamily::ClassicalBaskakovKantorovich => "classical-baskakov-kantorovich",
            OperatorFamily::GaussWeierstrass => "gauss-weierstrass",
        }
    }

    /// Whether the coefficients are Choquet integrals.
    pub fn is_choquet(self) -> bool {
        matches!(
            self,
            OperatorFamily::BernsteinKc
                | OperatorFamily::SzaszKc
                | OperatorFamily::BaskakovKc
                | OperatorFamily::DurrmeyerChoquetSimplex
        )
    }

    /// Whether the family is indexed by a bandwidth rather than a degree.
    pub fn uses_bandwidth(self) -> bool {
        self == OperatorFamily::GaussWeierstrass
    }

    /// Whether the family's domain is `[0, ∞)`.
    pub fn is_half_line(self) -> bool {
        matches!(
            self,
            OperatorFamily::SzaszKc
                | OperatorFamily::BaskakovKc
                | OperatorFamily::ClassicalSzaszMirakjan
                | OperatorFamily::ClassicalSzaszKantorovich
                | OperatorFamily::ClassicalBaskakovKantorovich
        )
    }
}

impl fmt::Display for OperatorFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for OperatorFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|f| f.tag() == s).ok_or_else(|| {
            let tags: Vec<_> = Self::ALL.iter().map(|f| f.tag()).collect();
            Error::usage(format!(
                "unknown operator family '{s}'; valid tags: {}",
                tags.join(", ")
            ))
        })
    }
}

/// Degree `n` or bandwidth `h`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorParam {
    Degree(usize),
    Bandwidth(f64),
}

/// Pointwise evaluation interface shared by every operator.
pub trait Approximator: Send + Sync {
    fn name(&self) -> String;

    /// Number of variables of the functions acted on.
    fn dim(&self) -> usize;

    /// Whether `x` lies in the operator's domain.
    fn contains(&self, x: &[f64]) -> bool;

    /// `T(f)(x)` for every point, in order.
    fn evaluate_many(&self, f: &Func, points: &[Vec<f64>]) -> Result<Vec<Evaluation>>;

    fn evaluate(&self, f: &Func, x: &[f64]) -> Result<Evaluation> {
        Ok(self.evaluate_many(f, &[x.to_vec()])?.remove(0))
    }
}

/// One member of an operator family.
#[derive(Debug, Clone)]
pub struct OperatorInstance {
    family: OperatorFamily,
    param: OperatorParam,
    capacity: Option<Capacity>,
    tail_bound: f64,
    quadrature: QuadratureConfig,
    cache: Option<Arc<CoefficientCache>>,
}

impl OperatorInstance {
    /// Checks the parameter kind and the capacity domain against the family.
    /// Classical families ignore the capacity and accept `None`.
    pub fn new(
        family: OperatorFamily,
        param: OperatorParam,
        capacity: Option<Capacity>,
    ) -> Result<Self> {
        match (family.uses_bandwidth(), param) {
            (true, OperatorParam::Bandwidth(h)) if h > 0.0 && h.is_finite() => {}
            (false, OperatorParam::Degree(n)) if n >= 1 => {}
            (true, _) => return Err(Error::usage(format!("{family} needs a bandwidth h > 0"))),
            (false, _) => return Err(Error::usage(format!("{family} needs a degree n >= 1"))),
        }
        if family.is_choquet() {
            let cap = capacity
                .as_ref()
                .ok_or_else(|| Error::usage(format!("{family} needs a capacity")))?;
            check_capacity(family, cap)?;
        }
        Ok(Self {
            family,
            param,
            capacity,
            tail_bound: DEFAULT_TAIL_BOUND,
            quadrature: QuadratureConfig::default(),
            cache: None,
        })
    }

    pub fn with_tail_bound(mut self, bound: f64) -> Result<Self> {
        if !(bound > 0.0 && bound <= 1e-6) {
            return Err(Error::usage(format!(
                "tail bound {bound} outside (0, 1e-6]"
            )));
        }
        self.tail_bound = bound;
        Ok(self)
    }

    pub fn with_quadrature(mut self, cfg: QuadratureConfig) -> Result<Self> {
        cfg.validate()?;
        self.quadrature = cfg;
        Ok(self)
    }

    pub fn with_cache(mut self, cache: Arc<CoefficientCache>) -> Self {
        self.cache = Some(cache);
        self
    }

    pub fn without_cache(mut self) -> Self {
        self.cache = None;
        self
    }

    pub fn family(&self) -> OperatorFamily {
        self.family
    }

    pub fn param(&self) -> OperatorParam {
        self.param
    }

    pub fn degree(&self) -> Option<usize> {
        match self.param {
            OperatorParam::Degree(n) => Some(n),
            OperatorParam::Bandwidth(_) => None,
        }
    }

    pub fn bandwidth(&self) -> Option<f64> {
        match self.param {
            OperatorParam::Bandwidth(h) => Some(h),
            OperatorParam::Degree(_) => None,
        }
    }

    pub fn capacity(&self) -> Option<&Capacity> {
        self.capacity.as_ref()
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn quadrature(&self) -> &QuadratureConfig {
        &self.quadrature
    }

    pub fn cache(&self) -> Option<&Arc<CoefficientCache>> {
        self.cache.as_ref()
    }

    pub(crate) fn n(&self) -> usize {
        self.degree().expect("degree-indexed family")
    }

    pub(crate) fn choquet_capacity(&self) -> &Capacity {
        self.capacity.as_ref().expect("validated at construction")
    }

    pub(crate) fn expect_family(&self, family: OperatorFamily) -> Result<()> {
        if self.family != family {
            return Err(Error::usage(format!(
                "expected a {family} instance, got {}",
                self.family
            )));
        }
        Ok(())
    }

    pub(crate) fn check_points(&self, points: &[Vec<f64>]) -> Result<()> {
        for x in points {
            if x.len() != self.dim() {
                return Err(Error::usage(format!(
                    "point {x:?} has the wrong dimension for {}",
                    self.family
                )));
            }
            if !self.contains(x) {
                return Err(Error::domain(format!(
                    "point {x:?} lies outside the domain of {}",
                    self.family
                )));
            }
        }
        Ok(())
    }
}

fn check_capacity(family: OperatorFamily, cap: &Capacity) -> Result<()> {
    let ok = match (family, cap.base()) {
        (OperatorFamily::BernsteinKc, BaseMeasure::Lebesgue { lo, hi }) => *lo <= 0.0 && *hi >= 1.0,
        (
            OperatorFamily::SzaszKc | OperatorFamily::BaskakovKc,
            BaseMeasure::Lebesgue { lo, hi },
        ) => *lo <= 0.0 && *hi == f64::INFINITY,
        (OperatorFamily::DurrmeyerChoquetSimplex, BaseMeasure::LebesgueSimplex { .. }) => true,
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        let need = match family {
            OperatorFamily::BernsteinKc => "a Lebesgue base covering [0,1]",
            OperatorFamily::DurrmeyerChoquetSimplex => "a Lebesgue base on a simplex",
            _ => "a Lebesgue base on [0,inf]",
        };
        Err(Error::usage(format!("{family} needs {need}, got {cap}")))
    }
}

impl Approximator for OperatorInstance {
    fn name(&self) -> String {
        match self.param {
            OperatorParam::Degree(n) => format!("{}[n={n}]", self.family),
            OperatorParam::Bandwidth(h) => format!("{}[h={h}]", self.family),
        }
    }

    fn dim(&self) -> usize {
        match (self.family, &self.capacity) {
            (OperatorFamily::DurrmeyerChoquetSimplex, Some(cap)) => cap.base().dim(),
            _ => 1,
        }
    }

    fn contains(&self, x: &[f64]) -> bool {
        if x.iter().any(|v| !v.is_finite()) {
            return false;
        }
        match self.family {
            OperatorFamily::BernsteinKc | OperatorFamily::ClassicalBernstein => {
                (0.0..=1.0).contains(&x[0])
            }
            OperatorFamily::DurrmeyerChoquetSimplex => {
                x.iter().all(|&v| v >= 0.0) && x.iter().sum::<f64>() <= 1.0 + 1e-12
            }
            OperatorFamily::GaussWeierstrass => true,
            _ => x[0] >= 0.0,
        }
    }

    fn evaluate_many(&self, f: &Func, points: &[Vec<f64>]) -> Result<Vec<Evaluation>> {
        if f.dim() != self.dim() {
            return Err(Error::usage(format!(
                "{} acts on functions of {} variables, got {}",
                self.family,
                self.dim(),
                f.dim()
            )));
        }
        self.check_points(points)?;
        match self.family {
            OperatorFamily::BernsteinKc | OperatorFamily::SzaszKc | OperatorFamily::BaskakovKc => {
                kantorovich::evaluate(self, f, points)
            }
            OperatorFamily::DurrmeyerChoquetSimplex => durrmeyer::evaluate(self, f, points),
            _ => classical::evaluate(self, f, points),
        }
    }
}

/// `x ↦ −T(f)(x)`; a deliberately broken operator for exercising verdicts.
#[derive(Debug, Clone)]
pub struct Negated<A>(pub A);

impl<A: Approximator> Approximator for Negated<A> {
    fn name(&self) -> String {
        format!("negated({})", self.0.name())
    }

    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn contains(&self, x: &[f64]) -> bool {
        self.0.contains(x)
    }

    fn evaluate_many(&self, f: &Func, points: &[Vec<f64>]) -> Result<Vec<Evaluation>> {
        Ok(self
            .0
            .evaluate_many(f, points)?
            .into_iter()
            .map(|e| Evaluation {
                value: -e.value,
                error: e.error,
            })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt_unit() -> Capacity {
        Capacity::sqrt_lebesgue(0.0, 1.0).unwrap()
    }

    #[test]
    fn family_tags_round_trip() {
        for fam in OperatorFamily::ALL {
            assert_eq!(fam.tag().parse::<OperatorFamily>().unwrap(), fam);
            assert_eq!(
                serde_json::to_string(&fam).unwrap(),
                format!("\"{}\"", fam.tag())
            );
        }
        let err = "bernstein"
            .parse::<OperatorFamily>()
            .unwrap_err()
            .to_string();
        assert!(err.contains("bernstein-kc") && err.contains("gauss-weierstrass"));
    }

    #[test]
    fn construction_checks_parameters_and_domains() {
        use OperatorFamily::*;
        assert!(
            OperatorInstance::new(BernsteinKc, OperatorParam::Degree(4), Some(sqrt_unit())).is_ok()
        );
        assert!(
            OperatorInstance::new(BernsteinKc, OperatorParam::Degree(0), Some(sqrt_unit()))
                .is_err()
        );
        assert!(OperatorInstance::new(BernsteinKc, OperatorParam::Degree(4), None).is_err());
        assert!(
            OperatorInstance::new(SzaszKc, OperatorParam::Degree(4), Some(sqrt_unit())).is_err()
        );
        let half = Capacity::sqrt_lebesgue(0.0, f64::INFINITY).unwrap();
        assert!(OperatorInstance::new(SzaszKc, OperatorParam::Degree(4), Some(half)).is_ok());
        assert!(OperatorInstance::new(GaussWeierstrass, OperatorParam::Degree(4), None).is_err());
        assert!(
            OperatorInstance::new(GaussWeierstrass, OperatorParam::Bandwidth(0.1), None).is_ok()
        );
        assert!(OperatorInstance::new(ClassicalBernstein, OperatorParam::Degree(3), None).is_ok());
        let inst =
            OperatorInstance::new(ClassicalBernstein, OperatorParam::Degree(3), None).unwrap();
        assert!(inst.clone().with_tail_bound(1e-3).is_err());
        assert!(inst.with_tail_bound(1e-8).is_ok());
    }

    #[test]
    fn points_are_checked() {
        let inst = OperatorInstance::new(
            OperatorFamily::BernsteinKc,
            OperatorParam::Degree(4),
            Some(sqrt_unit()),
        )
        .unwrap();
        let one = Func::constant(1, 1.0);
        assert!(matches!(inst.evaluate(&one, &[1.5]), Err(Error::Domain(_))));
        assert!(matches!(
            inst.evaluate(&Func::constant(2, 1.0), &[0.5]),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn negation_flips_values() {
        let inst = OperatorInstance::new(
            OperatorFamily::ClassicalBernstein,
            OperatorParam::Degree(4),
            None,
        )
        .unwrap();
        let v = Negated(inst)
            .evaluate(&Func::constant(1, 1.0), &[0.3])
            .unwrap();
        assert!((v.value + 1.0).abs() < 1e-15);
    }
}
