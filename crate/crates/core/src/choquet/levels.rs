//! Super-level sets `{t ∈ [a, b] : f(t) ≥ level}` of a function of one
//! variable, as canonical interval unions.
//!
//! The window is cut into runs on which `f` is monotone: a single run when
//! the caller promises monotonicity, otherwise the runs of a uniform sample
//! with interior extrema sharpened by golden-section search. Inside a run the
//! level set is a prefix or a suffix whose boundary is located by a
//! bracketing root finder.

use crate::capacity::IntervalSet;
use crate::error::{Error, Result};
use crate::func::{Func, Monotonicity};

#[derive(Debug, Clone, Copy)]
struct Run {
    start: usize,
    end: usize,
    up: bool,
}

#[derive(Debug, Clone)]
pub(crate) struct LevelSets {
    f: Func,
    xs: Vec<f64>,
    vs: Vec<f64>,
    runs: Vec<Run>,
    xtol: f64,
    breaks: usize,
}

impl LevelSets {
    /// `resolution` samples are taken when `f` carries no monotonicity
    /// hint; a hinted `f` is sampled at `breaks + 1` points.
    pub(crate) fn new(f: &Func, a: f64, b: f64, resolution: usize, breaks: usize) -> Result<Self> {
        let xtol = 1e-15 * a.abs().max(b.abs()).max(b - a);
        let hinted = f.hint() != Monotonicity::Unknown;
        let samples = if hinted { breaks.max(1) } else { resolution };
        let step = (b - a) / samples as f64;
        let xs: Vec<f64> = (0..=samples)
            .map(|i| if i == samples { b } else { a + i as f64 * step })
            .collect();
        let vs: Vec<f64> = xs.iter().map(|&x| f.at1(x)).collect();
        if vs.iter().any(|v| !v.is_finite()) {
            return Err(Error::usage(format!(
                "integrand is not finite on [{a}, {b}]"
            )));
        }
        let mut me = Self {
            f: f.clone(),
            xs,
            vs,
            runs: Vec::new(),
            xtol,
            breaks: breaks.max(1),
        };
        if hinted {
            let up = f.hint() == Monotonicity::Nondecreasing;
            if me
                .vs
                .windows(2)
                .any(|w| if up { w[1] < w[0] } else { w[1] > w[0] })
            {
                return Err(Error::usage(
                    "monotonicity hint contradicts the sampled values",
                ));
            }
            me.runs.push(Run {
                start: 0,
                end: samples,
                up,
            });
        } else {
            me.split_runs();
        }
        me.runs.shrink_to_fit();
        Ok(me)
    }

    fn split_runs(&mut self) {
        let n = self.xs.len();
        let mut runs = Vec::new();
        let mut start = 0;
        let mut dir = 0i8;
        for i in 1..n {
            let d = match self.vs[i].partial_cmp(&self.vs[i - 1]) {
                Some(std::cmp::Ordering::Greater) => 1,
                Some(std::cmp::Ordering::Less) => -1,
                _ => 0,
            };
            if d != 0 && dir != 0 && d != dir {
                runs.push(Run {
                    start,
                    end: i - 1,
                    up: dir > 0,
                });
                start = i - 1;
            }
            if d != 0 {
                dir = d;
            }
        }
        runs.push(Run {
            start,
            end: n - 1,
            up: dir >= 0,
        });
        self.runs = runs;
        // Sharpen interior extrema: the true extremum lies between the
        // neighbours of the sampled one.
        for k in 1..self.runs.len() {
            let i = self.runs[k].start;
            if i == 0 || i + 1 >= n {
                continue;
            }
            let maximize = self.runs[k - 1].up;
            let (x, v) = golden_extremum(&self.f, self.xs[i - 1], self.xs[i + 1], maximize);
            let better = if maximize {
                v > self.vs[i]
            } else {
                v < self.vs[i]
            };
            if better && x > self.xs[i - 1] && x < self.xs[i + 1] {
                self.xs[i] = x;
                self.vs[i] = v;
            }
        }
    }

    pub(crate) fn min(&self) -> f64 {
        self.vs.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub(crate) fn max(&self) -> f64 {
        self.vs.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub(crate) fn boundary_count(&self) -> usize {
        self.runs.len() + 1
    }

    /// Levels at which the survival function may have kinks or jumps
    /// (values at run ends and on sampled plateaus), plus the values on a
    /// coarse uniform grid of each run. The latter keep a stretch of `x`
    /// where `f` is nearly flat from hiding between quadrature nodes on the
    /// level axis.
    pub(crate) fn critical_levels(&self) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        for r in &self.runs {
            let stride = ((r.end - r.start) / self.breaks).max(1);
            out.extend((r.start..r.end).step_by(stride).map(|i| self.vs[i]));
            out.push(self.vs[r.end]);
        }
        out.extend(self.vs.windows(2).filter(|w| w[0] == w[1]).map(|w| w[0]));
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    /// `{x : f(x) ≥ level}` within the window.
    pub(crate) fn at_level(&self, level: f64) -> IntervalSet {
        let mut parts = Vec::with_capacity(self.runs.len());
        for r in &self.runs {
            let vals = &self.vs[r.start..=r.end];
            if r.up {
                let count_below = vals.partition_point(|&v| v < level);
                if count_below == vals.len() {
                    continue;
                }
                let j = r.start + count_below;
                let left = if j == r.start {
                    self.xs[j]
                } else {
                    self.crossing(self.xs[j - 1], self.xs[j], level, true)
                };
                parts.push((left, self.xs[r.end]));
            } else {
                let count_above = vals.partition_point(|&v| v >= level);
                if count_above == 0 {
                    continue;
                }
                let j = r.start + count_above - 1;
                let right = if j == r.end {
                    self.xs[j]
                } else {
                    self.crossing(self.xs[j], self.xs[j + 1], level, false)
                };
                parts.push((self.xs[r.start], right));
            }
        }
        IntervalSet::canonical(parts)
    }

    /// Boundary of `{f ≥ level}` inside `[lo, hi]`, where `f` crosses the
    /// level once. `rising` means `f(lo) < level <= f(hi)`; the returned
    /// point is on the side where `f ≥ level`.
    ///
    /// Illinois-modified regula falsi with a bisection fallback.
    fn crossing(&self, lo: f64, hi: f64, level: f64, rising: bool) -> f64 {
        // g >= 0 exactly on the set side.
        let g = |x: f64| self.f.at1(x) - level;
        // For a falling crossing the set is on the left.
        let (mut out_x, mut in_x) = if rising { (lo, hi) } else { (hi, lo) };
        let (mut g_out, mut g_in) = (g(out_x), g(in_x));
        if g_in < 0.0 {
            // The sampled bracket disagrees with a fresh evaluation; fall back.
            return in_x;
        }
        if g_out >= 0.0 {
            return out_x;
        }
        let mut side = 0i8;
        for iter in 0..200 {
            if (in_x - out_x).abs() <= self.xtol {
                break;
            }
            let mut x = if iter % 4 == 3 || g_in == g_out {
                0.5 * (in_x + out_x)
            } else {
                out_x - g_out * (in_x - out_x) / (g_in - g_out)
            };
            let (l, h) = if out_x < in_x {
                (out_x, in_x)
            } else {
                (in_x, out_x)
            };
            if !(x > l && x < h) {
                x = 0.5 * (l + h);
                if !(x > l && x < h) {
                    break;
                }
            }
            let gx = g(x);
            if gx >= 0.0 {
                in_x = x;
                g_in = gx;
                if gx == 0.0 {
                    break;
                }
                if side == 1 {
                    g_out *= 0.5;
                }
                side = 1;
            } else {
                out_x = x;
                g_out = gx;
                if side == -1 {
                    g_in *= 0.5;
                }
                side = -1;
            }
        }
        in_x
    }
}

fn golden_extremum(f: &Func, mut a: f64, mut b: f64, maximize: bool) -> (f64, f64) {
    let sign = if maximize { -1.0 } else { 1.0 };
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let obj = |x: f64| sign * f.at1(x);
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let (mut fc, mut fd) = (obj(c), obj(d));
    let tol = 1e-15 * a.abs().max(b.abs()).max(1e-300);
    for _ in 0..120 {
        if (b - a).abs() <= tol {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = obj(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = obj(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f.at1(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(set: &IntervalSet, expected: &[(f64, f64)], tol: f64) -> bool {
        set.intervals().len() == expected.len()
            && set
                .intervals()
                .iter()
                .zip(expected)
                .all(|(a, b)| (a.0 - b.0).abs() <= tol && (a.1 - b.1).abs() <= tol)
    }

    #[test]
    fn monotone_hint_gives_suffix_and_prefix() {
        let sq = Func::unary(|t| t * t).with_hint(Monotonicity::Nondecreasing);
        let ls = LevelSets::new(&sq, 0.0, 1.0, 64, 16).unwrap();
        assert!(close(&ls.at_level(0.25), &[(0.5, 1.0)], 1e-14));
        assert!(close(&ls.at_level(-1.0), &[(0.0, 1.0)], 0.0));
        assert!(ls.at_level(1.5).is_empty());

        let neg = Func::unary(|t| -t).with_hint(Monotonicity::Nonincreasing);
        let ls = LevelSets::new(&neg, 0.0, 1.0, 64, 16).unwrap();
        assert!(close(&ls.at_level(-0.3), &[(0.0, 0.3)], 1e-14));
    }

    #[test]
    fn scan_mode_handles_a_bump() {
        // Peak at 0.3 sits off the sample grid.
        let f = Func::unary(|t| 1.0 - (t - 0.3).abs());
        let ls = LevelSets::new(&f, 0.0, 1.0, 16, 16).unwrap();
        assert!((ls.max() - 1.0).abs() < 1e-12);
        assert!(close(&ls.at_level(0.9), &[(0.2, 0.4)], 1e-13));
        assert!(close(&ls.at_level(0.75), &[(0.05, 0.55)], 1e-13));
    }

    #[test]
    fn scan_mode_handles_a_valley() {
        let f = Func::unary(|t| (t - 0.5).abs());
        let ls = LevelSets::new(&f, 0.0, 1.0, 32, 16).unwrap();
        assert!(close(
            &ls.at_level(0.25),
            &[(0.0, 0.25), (0.75, 1.0)],
            1e-13
        ));
        assert!(ls.min().abs() < 1e-12);
        assert!(close(&ls.at_level(0.0), &[(0.0, 1.0)], 0.0));
    }

    #[test]
    fn rejects_non_finite_samples() {
        let f = Func::unary(|t| 1.0 / t);
        assert!(LevelSets::new(&f, 0.0, 1.0, 16, 16).is_err());
    }

    #[test]
    fn rejects_contradicted_hint() {
        let f = Func::unary(|t| -t).with_hint(Monotonicity::Nondecreasing);
        assert!(LevelSets::new(&f, 0.0, 1.0, 16, 16).is_err());
    }
}
