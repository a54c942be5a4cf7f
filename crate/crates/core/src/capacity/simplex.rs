use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest simplex dimension handled by the grid machinery.
pub const MAX_SIMPLEX_DIM: usize = 3;

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Lebesgue measure of `{t ∈ Δ_N : t_N ≥ c}`, i.e. `(1−c)^N / N!`.
pub fn cap_volume(dim: usize, level: f64) -> f64 {
    let c = level.clamp(0.0, 1.0);
    (1.0 - c).powi(dim as i32) / factorial(dim)
}

#[derive(Debug, Clone, PartialEq)]
pub enum GridShape {
    /// The standard simplex `Δ_N = {x ≥ 0, Σ x ≤ 1}`.
    Simplex { dim: usize },
    /// An axis-aligned box.
    Box { lo: Vec<f64>, hi: Vec<f64> },
}

/// A uniform cell decomposition of a simplex or box.
///
/// Every cell carries the exact Lebesgue volume of its part inside the
/// shape and a representative point (the centroid of that part), so the
/// weights always add up to the exact total volume.
#[derive(Debug, Clone)]
pub struct CellGrid {
    shape: GridShape,
    per_axis: usize,
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl CellGrid {
    /// Cells of side `1/per_axis` covering `Δ_N`.
    pub fn simplex(dim: usize, per_axis: usize) -> Result<Self> {
        if dim == 0 || dim > MAX_SIMPLEX_DIM {
            return Err(Error::usage(format!(
                "simplex grids support dimensions 1..={MAX_SIMPLEX_DIM}, got {dim}"
            )));
        }
        if per_axis == 0 {
            return Err(Error::usage("grid needs at least one cell per axis"));
        }
        let m = per_axis;
        let h = 1.0 / m as f64;
        let cell_volume = h.powi(dim as i32);
        let mut points = Vec::new();
        let mut weights = Vec::new();
        let mut idx = vec![0usize; dim];
        loop {
            let s: usize = idx.iter().sum();
            if s < m {
                let r = m - s;
                let (fraction, offset) = partial_cell(dim, r);
                weights.push(fraction * cell_volume);
                points.extend(idx.iter().map(|&i| (i as f64 + offset) * h));
            }
            if !advance(&mut idx, m) {
                break;
            }
        }
        Ok(Self {
            shape: GridShape::Simplex { dim },
            per_axis,
            points,
            weights,
        })
    }

    /// Cells covering the box `[lo, hi]`, `per_axis` cells along each axis.
    pub fn boxed(lo: Vec<f64>, hi: Vec<f64>, per_axis: usize) -> Result<Self> {
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
        if per_axis == 0 {
            return Err(Error::usage("grid needs at least one cell per axis"));
        }
        let dim = lo.len();
        let steps: Vec<f64> = lo
            .iter()
            .zip(&hi)
            .map(|(a, b)| (b - a) / per_axis as f64)
            .collect();
        let cell_volume: f64 = steps.iter().product();
        let mut points = Vec::new();
        let mut weights = Vec::new();
        let mut idx = vec![0usize; dim];
        loop {
            weights.push(cell_volume);
            points.extend((0..dim).map(|k| lo[k] + (idx[k] as f64 + 0.5) * steps[k]));
            if !advance(&mut idx, per_axis) {
                break;
            }
        }
        Ok(Self {
            shape: GridShape::Box { lo, hi },
            per_axis,
            points,
            weights,
        })
    }

    pub fn shape(&self) -> &GridShape {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        match &self.shape {
            GridShape::Simplex { dim } => *dim,
            GridShape::Box { lo, .. } => lo.len(),
        }
    }

    pub fn per_axis(&self) -> usize {
        self.per_axis
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        let d = self.dim();
        &self.points[i * d..(i + 1) * d]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total_volume(&self) -> f64 {
        self.weights.iter().sum()
    }

    fn same_layout(&self, other: &Self) -> bool {
        self.shape == other.shape && self.per_axis == other.per_axis
    }
}

/// Odometer increment over `[0, m)^d`; false once it wraps around.
fn advance(idx: &mut [usize], m: usize) -> bool {
    for slot in idx.iter_mut() {
        *slot += 1;
        if *slot < m {
            return true;
        }
        *slot = 0;
    }
    false
}

/// Volume fraction and per-axis centroid offset of `{u ∈ [0,1]^d : Σu ≤ r}`.
/// For `d ≤ 3` every integer `r` is either `≤ 1` or `≥ d − 1`, which is all
/// this needs to cover.
fn partial_cell(dim: usize, r: usize) -> (f64, f64) {
    let d = dim as f64;
    if r >= dim {
        return (1.0, 0.5);
    }
    let rf = r as f64;
    if r <= 1 {
        (rf.powi(dim as i32) / factorial(dim), rf / (d + 1.0))
    } else {
        let q = d - rf;
        let cut = q.powi(dim as i32) / factorial(dim);
        let vol = 1.0 - cut;
        let centroid = (0.5 - (1.0 - q / (d + 1.0)) * cut) / vol;
        (vol, centroid)
    }
}

/// A subset of grid cells.
#[derive(Debug, Clone)]
pub struct GridMask {
    grid: Arc<CellGrid>,
    included: Vec<bool>,
}

impl GridMask {
    pub fn full(grid: Arc<CellGrid>) -> Self {
        let included = vec![true; grid.len()];
        Self { grid, included }
    }

    /// Cells whose representative point satisfies `keep`.
    pub fn from_predicate(grid: Arc<CellGrid>, keep: impl Fn(&[f64]) -> bool) -> Self {
        let included = (0..grid.len()).map(|i| keep(grid.point(i))).collect();
        Self { grid, included }
    }

    pub fn grid(&self) -> &Arc<CellGrid> {
        &self.grid
    }

    pub fn included(&self) -> &[bool] {
        &self.included
    }

    /// Lebesgue estimate: summed volume of the included cells.
    pub fn volume(&self) -> f64 {
        self.grid
            .weights()
            .iter()
            .zip(&self.included)
            .filter_map(|(w, &keep)| keep.then_some(*w))
            .sum()
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        if !self.grid.same_layout(&other.grid) {
            return Err(Error::usage("cannot intersect masks over different grids"));
        }
        let included = self
            .included
            .iter()
            .zip(&other.included)
            .map(|(a, b)| *a && *b)
            .collect();
        Ok(Self {
            grid: Arc::clone(&self.grid),
            included,
        })
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.grid.same_layout(&other.grid)
            && self
                .included
                .iter()
                .zip(&other.included)
                .all(|(a, b)| !*a || *b)
    }
}

/// A measurable part of the simplex `Δ_N`.
#[derive(Debug, Clone)]
pub enum SimplexRegion {
    /// The analytic cap `{t ∈ Δ_N : t_N ≥ level}`; `level <= 0` is all of `Δ_N`.
    Cap { dim: usize, level: f64 },
    /// Cells of a simplex grid.
    Mask(GridMask),
}

impl SimplexRegion {
    pub fn whole(dim: usize) -> Self {
        SimplexRegion::Cap { dim, level: 0.0 }
    }

    pub fn cap(dim: usize, level: f64) -> Self {
        SimplexRegion::Cap { dim, level }
    }

    pub fn dim(&self) -> usize {
        match self {
            SimplexRegion::Cap { dim, .. } => *dim,
            SimplexRegion::Mask(mask) => mask.grid.dim(),
        }
    }

    /// Lebesgue measure: closed form for caps, summed cell volumes for masks.
    pub fn volume(&self) -> f64 {
        match self {
            SimplexRegion::Cap { dim, level } => cap_volume(*dim, *level),
            SimplexRegion::Mask(mask) => mask.volume(),
        }
    }

    /// Grid mask of this region over `grid`.
    pub fn to_mask(&self, grid: &Arc<CellGrid>) -> Result<GridMask> {
        match self {
            SimplexRegion::Cap { dim, level } => {
                if *dim != grid.dim() {
                    return Err(Error::usage("cap and grid dimensions differ"));
                }
                let c = *level;
                Ok(GridMask::from_predicate(Arc::clone(grid), |p| {
                    p[p.len() - 1] >= c
                }))
            }
            SimplexRegion::Mask(mask) => {
                if !mask.grid.same_layout(grid) {
                    return Err(Error::usage("mask lives on a different grid"));
                }
                Ok(mask.clone())
            }
        }
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::usage("simplex regions of different dimensions"));
        }
        match (self, other) {
            (SimplexRegion::Cap { dim, level: a }, SimplexRegion::Cap { level: b, .. }) => {
                Ok(SimplexRegion::Cap {
                    dim: *dim,
                    level: a.max(*b),
                })
            }
            (SimplexRegion::Mask(m), region) | (region, SimplexRegion::Mask(m)) => {
                let other = region.to_mask(&m.grid)?;
                Ok(SimplexRegion::Mask(m.intersection(&other)?))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_weights_sum_to_exact_volume() {
        for dim in 1..=3 {
            for m in [1, 2, 7, 32] {
                let g = CellGrid::simplex(dim, m).unwrap();
                let exact = 1.0 / factorial(dim);
                assert!((g.total_volume() - exact).abs() < 1e-13, "dim {dim} m {m}");
                for i in 0..g.len() {
                    let p = g.point(i);
                    assert!(p.iter().all(|&x| x >= 0.0));
                    assert!(p.iter().sum::<f64>() <= 1.0 + 1e-12);
                }
            }
        }
    }

    #[test]
    fn cap_grid_estimate_converges() {
        let dim = 2;
        for c in [0.0, 0.3, 0.5, 0.77] {
            let exact = cap_volume(dim, c);
            let mut prev = f64::INFINITY;
            for m in [32, 64, 128, 256] {
                let grid = Arc::new(CellGrid::simplex(dim, m).unwrap());
                let est = SimplexRegion::cap(dim, c).to_mask(&grid).unwrap().volume();
                let rel = (est - exact).abs() / exact;
                if m == 256 {
                    assert!(rel < 0.01, "c={c} rel={rel}");
                }
                assert!(rel <= prev + 1e-3, "c={c} m={m}");
                prev = rel;
            }
        }
    }

    #[test]
    fn box_grid_volume() {
        let g = CellGrid::boxed(vec![0.0, -1.0], vec![2.0, 1.0], 10).unwrap();
        assert_eq!(g.len(), 100);
        assert!((g.total_volume() - 4.0).abs() < 1e-12);
        assert!(CellGrid::boxed(vec![1.0], vec![0.0], 4).is_err());
    }

    #[test]
    fn region_intersections() {
        let a = SimplexRegion::cap(2, 0.2);
        let b = SimplexRegion::cap(2, 0.5);
        match a.intersection(&b).unwrap() {
            SimplexRegion::Cap { level, .. } => assert_eq!(level, 0.5),
            _ => panic!("cap ∩ cap should stay analytic"),
        }
        let grid = Arc::new(CellGrid::simplex(2, 64).unwrap());
        let left = SimplexRegion::Mask(GridMask::from_predicate(Arc::clone(&grid), |p| {
            p[0] <= 0.25
        }));
        let both = left.intersection(&b).unwrap();
        assert!(both.volume() < left.volume());
        assert!(both.volume() < b.volume());
        assert!(CellGrid::simplex(4, 8).is_err());
    }
}
