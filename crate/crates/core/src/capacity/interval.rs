use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite union of closed intervals in canonical form.
///
/// Intervals are sorted, non-empty (`l <= r`) and separated by gaps
/// (`r_i < l_{i+1}`); overlapping or touching pieces are merged on
/// construction, so two sets covering the same points compare equal.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct IntervalSet {
    parts: Vec<(f64, f64)>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        Self { parts: Vec::new() }
    }

    /// The closed interval `[l, r]`.
    pub fn interval(l: f64, r: f64) -> Result<Self> {
        Self::from_intervals([(l, r)])
    }

    /// Canonicalizes an arbitrary list of closed intervals.
    pub fn from_intervals<I>(intervals: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        let mut parts: Vec<(f64, f64)> = Vec::new();
        for (l, r) in intervals {
            if l.is_nan() || r.is_nan() {
                return Err(Error::usage("interval endpoint is NaN"));
            }
            if l > r {
                return Err(Error::usage(format!("interval [{l}, {r}] has l > r")));
            }
            parts.push((l, r));
        }
        Ok(Self::canonical(parts))
    }

    /// Builds from already valid pieces (`l <= r`, no NaN), merging as needed.
    pub(crate) fn canonical(mut parts: Vec<(f64, f64)>) -> Self {
        parts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(parts.len());
        for (l, r) in parts {
            match merged.last_mut() {
                Some(last) if l <= last.1 => last.1 = last.1.max(r),
                _ => merged.push((l, r)),
            }
        }
        Self { parts: merged }
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Total length `Σ (r_i − l_i)`.
    pub fn length(&self) -> f64 {
        self.parts.iter().map(|(l, r)| r - l).sum()
    }

    pub fn contains(&self, x: f64) -> bool {
        let idx = self.parts.partition_point(|&(_, r)| r < x);
        self.parts.get(idx).is_some_and(|&(l, _)| l <= x)
    }

    /// Smallest closed interval containing the set, if non-empty.
    pub fn hull(&self) -> Option<(f64, f64)> {
        match (self.parts.first(), self.parts.last()) {
            (Some(first), Some(last)) => Some((first.0, last.1)),
            _ => None,
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut parts = self.parts.clone();
        parts.extend_from_slice(&other.parts);
        Self::canonical(parts)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let (a, b) = (&self.parts, &other.parts);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            let l = a[i].0.max(b[j].0);
            let r = a[i].1.min(b[j].1);
            if l <= r {
                out.push((l, r));
            }
            if a[i].1 < b[j].1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        // Consecutive overlaps may touch at a shared endpoint.
        Self::canonical(out)
    }

    /// Intersection with a single interval, without allocating a second set.
    pub fn clip(&self, lo: f64, hi: f64) -> Self {
        let parts = self
            .parts
            .iter()
            .filter_map(|&(l, r)| {
                let (l, r) = (l.max(lo), r.min(hi));
                (l <= r).then_some((l, r))
            })
            .collect();
        Self { parts }
    }

    /// `self ⊆ other` as point sets.
    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.parts.iter().all(|&(l, r)| {
            let idx = other.parts.partition_point(|&(_, orr)| orr < l);
            other
                .parts
                .get(idx)
                .is_some_and(|&(ol, or)| ol <= l && r <= or)
        })
    }
}
