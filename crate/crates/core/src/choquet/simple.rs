use crate::capacity::{BaseMeasure, Capacity, Distortion, IntervalSet};
use crate::error::{Error, Result};

/// A function taking finitely many values, each on an interval union.
///
/// Canonical form: one piece per distinct value, pieces sorted by
/// decreasing value, pairwise overlaps of zero length.
#[derive(Debug, Clone, PartialEq)]
pub struct SimpleFunction {
    pieces: Vec<(f64, IntervalSet)>,
}

impl SimpleFunction {
    pub fn new(pieces: Vec<(f64, IntervalSet)>) -> Result<Self> {
        if pieces.iter().any(|(v, _)| !v.is_finite()) {
            return Err(Error::usage("simple function values must be finite"));
        }
        for i in 0..pieces.len() {
            for j in i + 1..pieces.len() {
                if pieces[i].1.intersection(&pieces[j].1).length() > 0.0 {
                    return Err(Error::usage(format!("pieces {i} and {j} overlap")));
                }
            }
        }
        let mut merged: Vec<(f64, IntervalSet)> = Vec::new();
        for (v, set) in pieces {
            if set.is_empty() {
                continue;
            }
            match merged.iter_mut().find(|(w, _)| *w == v) {
                Some((_, acc)) => *acc = acc.union(&set),
                None => merged.push((v, set)),
            }
        }
        if merged.is_empty() {
            return Err(Error::usage("simple function needs a non-empty domain"));
        }
        merged.sort_by(|a, b| b.0.total_cmp(&a.0));
        Ok(Self { pieces: merged })
    }

    /// Step function with `values[i]` on `[breaks[i], breaks[i+1]]`.
    pub fn steps(breaks: &[f64], values: &[f64]) -> Result<Self> {
        if breaks.len() != values.len() + 1 {
            return Err(Error::usage("need exactly one more break than values"));
        }
        let pieces = breaks
            .windows(2)
            .zip(values)
            .map(|(w, &v)| Ok((v, IntervalSet::interval(w[0], w[1])?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(pieces)
    }

    pub fn constant(value: f64, domain: IntervalSet) -> Result<Self> {
        Self::new(vec![(value, domain)])
    }

    /// `(value, piece)` pairs by decreasing value.
    pub fn pieces(&self) -> &[(f64, IntervalSet)] {
        &self.pieces
    }

    pub fn domain(&self) -> IntervalSet {
        self.pieces
            .iter()
            .fold(IntervalSet::empty(), |acc, (_, s)| acc.union(s))
    }

    /// Value at `x`; on a boundary shared by two pieces the larger value.
    pub fn value_at(&self, x: f64) -> Option<f64> {
        self.pieces
            .iter()
            .find(|(_, s)| s.contains(x))
            .map(|(v, _)| *v)
    }

    pub fn map(&self, op: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(
            self.pieces
                .iter()
                .map(|(v, s)| (op(*v), s.clone()))
                .collect(),
        )
    }

    pub fn scale(&self, a: f64) -> Result<Self> {
        self.map(|v| a * v)
    }

    pub fn shift(&self, c: f64) -> Result<Self> {
        self.map(|v| v + c)
    }

    /// Pointwise `op(f, g)` on the common refinement. Both functions must
    /// share the same domain.
    pub fn zip_with(&self, other: &Self, op: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let (da, db) = (self.domain(), other.domain());
        if da != db {
            return Err(Error::usage("simple functions live on different domains"));
        }
        let mut pieces = Vec::new();
        for (va, sa) in &self.pieces {
            for (vb, sb) in &other.pieces {
                let cut = sa.intersection(sb);
                if cut.is_empty() {
                    continue;
                }
                // Shared endpoints produce zero-length cuts; keep those only
                // for genuinely point-like pieces.
                let point_like = sa.length() == 0.0 || sb.length() == 0.0;
                if cut.length() > 0.0 || point_like {
                    pieces.push((op(*va, *vb), cut));
                }
            }
        }
        Self::new(pieces)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sup(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, f64::max)
    }

    pub fn inf(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, f64::min)
    }

    /// `f ≤ g` on every piece of the common refinement.
    pub fn le(&self, other: &Self) -> Result<bool> {
        let diff = other.zip_with(self, |g, f| g - f)?;
        Ok(diff.pieces.iter().all(|(v, _)| *v >= 0.0))
    }
}

/// Exact Choquet integral of a simple function over its domain `D`, with
/// respect to `μ_D`.
///
/// With distinct values `a_1 > ... > a_m` and cumulative super-level sets
/// `S_i`, the value is `Σ_{i<m} (a_i − a_{i+1}) μ(S_i) + a_m μ(S_m)`; the
/// last term carries the `−μ(X)` correction for negative values.
pub fn choquet_simple(f: &SimpleFunction, cap: &Capacity) -> Result<f64> {
    if let BaseMeasure::Discrete { .. } = cap.base() {
        // Atoms on shared endpoints would be counted by two pieces.
        let counter = Capacity::new(cap.base().clone(), Distortion::identity())?;
        let p = f.pieces();
        for i in 0..p.len() {
            for j in i + 1..p.len() {
                if counter.measure_intervals(&p[i].1.intersection(&p[j].1))? > 0.0 {
                    return Err(Error::usage(format!("pieces {i} and {j} share an atom")));
                }
            }
        }
    }
    let mut level_set = IntervalSet::empty();
    let mut total = 0.0;
    let pieces = f.pieces();
    for (i, (value, piece)) in pieces.iter().enumerate() {
        level_set = level_set.union(piece);
        let next = pieces.get(i + 1).map_or(0.0, |p| p.0);
        let step = if i + 1 == pieces.len() {
            *value
        } else {
            value - next
        };
        total += step * cap.measure_intervals(&level_set)?;
    }
    Ok(total)
}
