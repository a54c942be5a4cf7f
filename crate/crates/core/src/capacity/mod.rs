//! Capacities: monotone, generally nonadditive set functions `μ = u ∘ ν`
//! built from a base measure `ν` and a distortion `u`, together with
//! finite-sample checkers for monotonicity and submodularity.

mod distortion;
mod interval;
mod simplex;
mod spec;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use distortion::Distortion;
pub use interval::IntervalSet;
pub use simplex::{cap_volume, CellGrid, GridMask, GridShape, SimplexRegion, MAX_SIMPLEX_DIM};

pub(crate) use simplex::factorial;

/// Absolute tolerance of the submodularity certificate.
pub const SUBMODULAR_TOL: f64 = 1e-12;

/// The additive measure a capacity distorts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BaseMeasure {
    /// Lebesgue measure on `[lo, hi]`; `hi` may be `+∞` for the raw form.
    Lebesgue { lo: f64, hi: f64 },
    /// N-dimensional Lebesgue measure on the simplex `Δ_N`.
    LebesgueSimplex { dim: usize },
    /// N-dimensional Lebesgue measure on a box.
    LebesgueBox { lo: Vec<f64>, hi: Vec<f64> },
    /// Finitely many weighted atoms on the real line, sorted by position.
    Discrete { atoms: Vec<(f64, f64)> },
}

impl BaseMeasure {
    pub fn lebesgue(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || !lo.is_finite() || lo >= hi {
            return Err(Error::usage(format!(
                "invalid Lebesgue interval [{lo}, {hi}]"
            )));
        }
        Ok(BaseMeasure::Lebesgue { lo, hi })
    }

    pub fn simplex(dim: usize) -> Result<Self> {
        if dim == 0 || dim > MAX_SIMPLEX_DIM {
            return Err(Error::usage(format!(
                "simplex dimension must be in 1..={MAX_SIMPLEX_DIM}, got {dim}"
            )));
        }
        Ok(BaseMeasure::LebesgueSimplex { dim })
    }

    pub fn boxed(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(Error::usage(
                "box corners must have the same positive dimension",
            ));
        }
        if lo
            .iter()
            .zip(&hi)
            .any(|(a, b)| !(a < b) || !a.is_finite() || !b.is_finite())
        {
            return Err(Error::usage("box needs finite lo < hi on every axis"));
        }
        Ok(BaseMeasure::LebesgueBox { lo, hi })
    }

    pub fn discrete(mut atoms: Vec<(f64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::usage("discrete measure needs at least one atom"));
        }
        if atoms
            .iter()
            .any(|(x, w)| !x.is_finite() || !w.is_finite() || *w < 0.0)
        {
            return Err(Error::usage(
                "discrete atoms need finite positions and weights >= 0",
            ));
        }
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        if atoms.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::usage(
                "discrete measure has two atoms at the same position",
            ));
        }
        if atoms.iter().map(|a| a.1).sum::<f64>() <= 0.0 {
            return Err(Error::usage("discrete measure has zero total mass"));
        }
        Ok(BaseMeasure::Discrete { atoms })
    }

    pub fn total_mass(&self) -> f64 {
        match self {
            BaseMeasure::Lebesgue { lo, hi } => hi - lo,
            BaseMeasure::LebesgueSimplex { dim } => 1.0 / factorial(*dim),
            BaseMeasure::LebesgueBox { lo, hi } => lo.iter().zip(hi).map(|(a, b)| b - a).product(),
            BaseMeasure::Discrete { atoms } => atoms.iter().map(|a| a.1).sum(),
        }
    }

    /// Number of coordinates of a point in the underlying space.
    pub fn dim(&self) -> usize {
        match self {
            BaseMeasure::Lebesgue { .. } | BaseMeasure::Discrete { .. } => 1,
            BaseMeasure::LebesgueSimplex { dim } => *dim,
            BaseMeasure::LebesgueBox { lo, .. } => lo.len(),
        }
    }

    pub(crate) fn atoms(&self) -> Option<&[(f64, f64)]> {
        match self {
            BaseMeasure::Discrete { atoms } => Some(atoms),
            _ => None,
        }
    }

    /// Base measure of a region, after checking it fits the domain.
    fn mass_of(&self, region: &Region) -> Result<f64> {
        match (self, region) {
            (BaseMeasure::Lebesgue { lo, hi }, Region::Intervals(set)) => {
                if let Some((l, r)) = set.hull() {
                    if l < *lo || r > *hi {
                        return Err(Error::domain(format!(
                            "set [{l}, {r}] leaves the domain [{lo}, {hi}]"
                        )));
                    }
                }
                Ok(set.length())
            }
            (BaseMeasure::Discrete { atoms }, Region::Intervals(set)) => Ok(atoms
                .iter()
                .filter(|(x, _)| set.contains(*x))
                .map(|(_, w)| w)
                .sum()),
            (BaseMeasure::LebesgueSimplex { dim }, Region::Simplex(region)) => {
                if region.dim() != *dim {
                    return Err(Error::domain(format!(
                        "{}-dimensional region on a {dim}-simplex",
                        region.dim()
                    )));
                }
                if let SimplexRegion::Mask(mask) = region {
                    if *mask.grid().shape() != (GridShape::Simplex { dim: *dim }) {
                        return Err(Error::domain("mask is not over the simplex"));
                    }
                }
                Ok(region.volume())
            }
            (BaseMeasure::LebesgueBox { lo, hi }, Region::Box(mask)) => {
                let expected = GridShape::Box {
                    lo: lo.clone(),
                    hi: hi.clone(),
                };
                if *mask.grid().shape() != expected {
                    return Err(Error::domain("mask grid does not cover the box domain"));
                }
                Ok(mask.volume())
            }
            _ => Err(Error::domain("region kind does not match the base measure")),
        }
    }
}

/// A measurable set understood by some base measure.
#[derive(Debug, Clone)]
pub enum Region {
    Intervals(IntervalSet),
    Simplex(SimplexRegion),
    Box(GridMask),
}

impl Region {
    fn intersection(&self, other: &Region) -> Result<Region> {
        match (self, other) {
            (Region::Intervals(a), Region::Intervals(b)) => {
                Ok(Region::Intervals(a.intersection(b)))
            }
            (Region::Simplex(a), Region::Simplex(b)) => Ok(Region::Simplex(a.intersection(b)?)),
            (Region::Box(a), Region::Box(b)) => Ok(Region::Box(a.intersection(b)?)),
            _ => Err(Error::domain("cannot intersect regions of different kinds")),
        }
    }
}

impl From<IntervalSet> for Region {
    fn from(set: IntervalSet) -> Self {
        Region::Intervals(set)
    }
}

impl From<SimplexRegion> for Region {
    fn from(region: SimplexRegion) -> Self {
        Region::Simplex(region)
    }
}

/// A distorted measure `A ↦ u(ν(A ∩ R))`, optionally normalized so that
/// the base is a probability, optionally restricted to a region `R`.
#[derive(Debug, Clone)]
pub struct Capacity {
    base: BaseMeasure,
    distortion: Distortion,
    normalized: bool,
    restriction: Option<Region>,
}

impl Capacity {
    /// Raw (unnormalized) distorted measure.
    pub fn new(base: BaseMeasure, distortion: Distortion) -> Result<Self> {
        let cap = Self {
            base,
            distortion,
            normalized: false,
            restriction: None,
        };
        cap.validate()?;
        Ok(cap)
    }

    /// Distortion applied to the base measure rescaled to total mass one.
    pub fn normalized(base: BaseMeasure, distortion: Distortion) -> Result<Self> {
        let cap = Self {
            base,
            distortion,
            normalized: true,
            restriction: None,
        };
        cap.validate()?;
        Ok(cap)
    }

    /// `μ = √𝓛` on `[lo, hi]`.
    pub fn sqrt_lebesgue(lo: f64, hi: f64) -> Result<Self> {
        Self::new(BaseMeasure::lebesgue(lo, hi)?, Distortion::power(0.5)?)
    }

    /// `μ = √𝓛_N` on the simplex `Δ_N`.
    pub fn sqrt_lebesgue_simplex(dim: usize) -> Result<Self> {
        Self::new(BaseMeasure::simplex(dim)?, Distortion::power(0.5)?)
    }

    fn validate(&self) -> Result<()> {
        let total = self.base.total_mass();
        if !(total > 0.0) {
            return Err(Error::usage("base measure must have positive total mass"));
        }
        if self.normalized && !total.is_finite() {
            return Err(Error::usage(
                "cannot normalize a base measure of infinite mass",
            ));
        }
        let top = if self.normalized { 1.0 } else { total };
        if top > self.distortion.max_argument() {
            return Err(Error::usage(format!(
                "distortion is only defined up to {} but the base has mass {top}",
                self.distortion.max_argument()
            )));
        }
        Ok(())
    }

    pub fn base(&self) -> &BaseMeasure {
        &self.base
    }

    pub fn distortion(&self) -> &Distortion {
        &self.distortion
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn restriction(&self) -> Option<&Region> {
        self.restriction.as_ref()
    }

    /// Whether the capacity is known to be submodular (concave distortion of
    /// an additive base).
    pub fn is_submodular(&self) -> bool {
        self.distortion.is_concave()
    }

    /// `u(mass)`, or `u(mass / ν(X))` for normalized capacities.
    pub fn distort_mass(&self, mass: f64) -> Result<f64> {
        let x = if self.normalized {
            mass / self.base.total_mass()
        } else {
            mass
        };
        let max = self.distortion.max_argument();
        if x > max * (1.0 + 1e-12) {
            return Err(Error::domain(format!(
                "mass {x} exceeds the distortion domain [0, {max}]"
            )));
        }
        Ok(self.distortion.apply(x.min(max)))
    }

    /// `μ(A)`.
    pub fn measure(&self, region: &Region) -> Result<f64> {
        let mass = match &self.restriction {
            None => self.base.mass_of(region)?,
            Some(r) => {
                // Domain check on the unrestricted set first.
                self.base.mass_of(region)?;
                self.base.mass_of(&region.intersection(r)?)?
            }
        };
        self.distort_mass(mass)
    }

    pub fn measure_intervals(&self, set: &IntervalSet) -> Result<f64> {
        match (&self.restriction, &self.base) {
            (None, BaseMeasure::Lebesgue { lo, hi }) => {
                if let Some((l, r)) = set.hull() {
                    if l < *lo || r > *hi {
                        return Err(Error::domain(format!(
                            "set [{l}, {r}] leaves the domain [{lo}, {hi}]"
                        )));
                    }
                }
                self.distort_mass(set.length())
            }
            _ => self.measure(&Region::Intervals(set.clone())),
        }
    }

    /// `μ(X)` for the (possibly restricted) capacity.
    pub fn total(&self) -> Result<f64> {
        match &self.restriction {
            None => self.distort_mass(self.base.total_mass()),
            Some(r) => self.distort_mass(self.base.mass_of(r)?),
        }
    }

    /// The capacity `B ↦ μ(B ∩ A)`.
    pub fn restrict(&self, region: impl Into<Region>) -> Result<Capacity> {
        let region = region.into();
        self.base.mass_of(&region)?;
        let restriction = match &self.restriction {
            None => region,
            Some(r) => r.intersection(&region)?,
        };
        Ok(Capacity {
            restriction: Some(restriction),
            ..self.clone()
        })
    }

    /// The same capacity without any restriction.
    pub fn unrestricted(&self) -> Capacity {
        Capacity {
            restriction: None,
            ..self.clone()
        }
    }

    /// Whether the 1-D closed interval `[l, r]` lies in the domain.
    pub fn covers_interval(&self, l: f64, r: f64) -> bool {
        match &self.base {
            BaseMeasure::Lebesgue { lo, hi } => *lo <= l && r <= *hi,
            BaseMeasure::Discrete { .. } => true,
            _ => false,
        }
    }
}

impl fmt::Display for Capacity {
    /// Canonical specification string; restrictions are not representable
    /// and are rendered as a trailing `|restricted` marker.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        spec::write_spec(self, f)?;
        if self.restriction.is_some() {
            write!(f, "|restricted")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Capacity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        spec::parse_spec(s)
    }
}

/// Outcome of [`check_monotone`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotoneVerdict {
    pub pass: bool,
    /// First offending consecutive pair `(i, i + 1, μ(A_i), μ(A_{i+1}))`.
    pub violation: Option<(usize, usize, f64, f64)>,
}

/// Checks that `μ` is nondecreasing along a nested chain `A_0 ⊆ A_1 ⊆ ...`.
pub fn check_monotone(cap: &Capacity, chain: &[IntervalSet]) -> Result<MonotoneVerdict> {
    for (i, w) in chain.windows(2).enumerate() {
        if !w[0].is_subset_of(&w[1]) {
            return Err(Error::usage(format!(
                "chain is not nested at positions {i} and {}",
                i + 1
            )));
        }
    }
    let values = chain
        .iter()
        .map(|s| cap.measure_intervals(s))
        .collect::<Result<Vec<_>>>()?;
    let violation = values
        .windows(2)
        .position(|w| w[1] < w[0])
        .map(|i| (i, i + 1, values[i], values[i + 1]));
    Ok(MonotoneVerdict {
        pass: violation.is_none(),
        violation,
    })
}

/// Outcome of [`check_submodular`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubmodularVerdict {
    pub pass: bool,
    /// Minimum of `μ(A) + μ(B) − μ(A∪B) − μ(A∩B)` over the pairs.
    pub worst_slack: f64,
    pub worst_pair: Option<usize>,
}

/// Checks `μ(A∪B) + μ(A∩B) ≤ μ(A) + μ(B)` on each sampled pair.
pub fn check_submodular(
    cap: &Capacity,
    pairs: &[(IntervalSet, IntervalSet)],
) -> Result<SubmodularVerdict> {
    let mut worst_slack = f64::INFINITY;
    let mut worst_pair = None;
    for (i, (a, b)) in pairs.iter().enumerate() {
        let slack = cap.measure_intervals(a)? + cap.measure_intervals(b)?
            - cap.measure_intervals(&a.union(b))?
            - cap.measure_intervals(&a.intersection(b))?;
        if slack < worst_slack {
            worst_slack = slack;
            worst_pair = Some(i);
        }
    }
    Ok(SubmodularVerdict {
        pass: worst_slack >= -SUBMODULAR_TOL,
        worst_slack,
        worst_pair,
    })
}
