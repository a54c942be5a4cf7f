use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::func::{Func, Monotonicity};

/// Monotone inner map `h: [0,1] → [0,1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    Identity,
    Square,
    Exp,
}

impl Shape {
    pub const ALL: [Shape; 3] = [Shape::Identity, Shape::Square, Shape::Exp];

    pub fn apply(self, u: f64) -> f64 {
        match self {
            Shape::Identity => u,
            Shape::Square => u * u,
            Shape::Exp => u.exp_m1() / (std::f64::consts::E - 1.0),
        }
    }

    fn random(rng: &mut impl Rng) -> Self {
        Self::ALL[rng.gen_range(0..Self::ALL.len())]
    }
}

/// `x ↦ φ(h(u(x)))` with `u` the mean coordinate rescaled from `[lo, hi]`
/// onto `[0, 1]` and clamped, and `φ` piecewise linear on eight equal
/// pieces of `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseLinear {
    pub shape: Shape,
    pub start: f64,
    pub slopes: Vec<f64>,
    pub lo: f64,
    pub hi: f64,
}

impl PiecewiseLinear {
    pub const PIECES: usize = 8;

    /// Nonnegative slopes, so the result is nondecreasing.
    pub fn nondecreasing(rng: &mut impl Rng, shape: Shape, lo: f64, hi: f64) -> Self {
        Self {
            shape,
            start: rng.gen_range(-1.0..=1.0),
            slopes: (0..Self::PIECES)
                .map(|_| rng.gen_range(0.0..=2.0))
                .collect(),
            lo,
            hi,
        }
    }

    /// Slopes of either sign and a random inner shape.
    pub fn signed(rng: &mut impl Rng, lo: f64, hi: f64) -> Self {
        let shape = Shape::random(rng);
        Self {
            shape,
            start: rng.gen_range(-1.0..=1.0),
            slopes: (0..Self::PIECES)
                .map(|_| rng.gen_range(-2.0..=2.0))
                .collect(),
            lo,
            hi,
        }
    }

    pub fn random_shape(rng: &mut impl Rng) -> Shape {
        Shape::random(rng)
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.slopes.iter().all(|&s| s >= 0.0)
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        let mean = x.iter().sum::<f64>() / x.len() as f64;
        let u = ((mean - self.lo) / (self.hi - self.lo)).clamp(0.0, 1.0);
        let v = self.shape.apply(u) * Self::PIECES as f64;
        let mut out = self.start;
        for (j, s) in self.slopes.iter().enumerate() {
            out += s * (v - j as f64).clamp(0.0, 1.0) / Self::PIECES as f64;
        }
        out
    }

    pub fn to_func(&self, dim: usize) -> Func {
        let me = self.clone();
        let f = Func::multivariate(dim, move |x| me.value(x));
        if dim == 1 && self.is_nondecreasing() {
            f.with_hint(Monotonicity::Nondecreasing)
        } else {
            f
        }
    }
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    #[test]
    fn shapes_fix_the_endpoints() {
        for s in Shape::ALL {
            assert!(s.apply(0.0).abs() < 1e-15);
            assert!((s.apply(1.0) - 1.0).abs() < 1e-15, "{s:?}");
        }
    }

    #[test]
    fn shared_shape_gives_comonotone_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let shape = PiecewiseLinear::random_shape(&mut rng);
            let f = PiecewiseLinear::nondecreasing(&mut rng, shape, 0.0, 1.0);
            let g = PiecewiseLinear::nondecreasing(&mut rng, shape, 0.0, 1.0);
            let xs: Vec<f64> = (0..=40).map(|i| -0.5 + i as f64 / 20.0).collect();
            for &s in &xs {
                for &t in &xs {
                    let d = (f.value(&[s]) - f.value(&[t])) * (g.value(&[s]) - g.value(&[t]));
                    assert!(d >= -1e-15);
                }
            }
        }
    }

    #[test]
    fn seeded_generation_is_reproducible() {
        let a = PiecewiseLinear::signed(&mut ChaCha8Rng::seed_from_u64(3), 0.0, 2.0);
        let b = PiecewiseLinear::signed(&mut ChaCha8Rng::seed_from_u64(3), 0.0, 2.0);
        assert_eq!(a, b);
    }
}
