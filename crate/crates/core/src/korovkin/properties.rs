use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::samples::PiecewiseLinear;
use super::{check_window, CompactWindow};
use crate::error::{Error, Result};
use crate::func::Func;
use crate::operators::{Approximator, Axiom, AxiomSet, Evaluation};

/// Scales used for the positive homogeneity check.
pub const HOMOGENEITY_SCALES: [f64; 5] = [0.0, 0.5, 1.0, 2.0, 10.0];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyConfig {
    pub samples: usize,
    pub seed: u64,
    /// Base tolerance; each comparison adds the evaluation error estimates.
    pub tolerance: f64,
    pub window: CompactWindow,
}

impl PropertyConfig {
    pub fn new(window: CompactWindow) -> Self {
        Self {
            samples: 100,
            seed: 42,
            tolerance: 1e-7,
            window,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    Monotone,
    PositivelyHomogeneous,
    Subadditive,
    ComonotoneAdditive,
    /// `|T(f) − T(g)| ≤ T(|f − g|)`
    AbsDifference,
    /// `T(f + a) = T(f) + a·T(1)` for `a ≥ 0`
    Translation,
    Additive,
}

impl Check {
    pub const ALL: [Check; 7] = [
        Check::Monotone,
        Check::PositivelyHomogeneous,
        Check::Subadditive,
        Check::ComonotoneAdditive,
        Check::AbsDifference,
        Check::Translation,
        Check::Additive,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Check::Monotone => "monotone",
            Check::PositivelyHomogeneous => "positively-homogeneous",
            Check::Subadditive => "subadditive",
            Check::ComonotoneAdditive => "comonotone-additive",
            Check::AbsDifference => "abs-difference",
            Check::Translation => "translation",
            Check::Additive => "additive",
        }
    }

    fn expected(self, set: &AxiomSet) -> bool {
        match self {
            Check::Monotone => set.contains(Axiom::Monotone),
            Check::PositivelyHomogeneous => set.contains(Axiom::PositivelyHomogeneous),
            Check::Subadditive => set.contains(Axiom::Subadditive),
            Check::ComonotoneAdditive => set.contains(Axiom::ComonotoneAdditive),
            Check::AbsDifference => set.contains(Axiom::Monotone) && set.is_sublinear(),
            Check::Translation => {
                set.contains(Axiom::ComonotoneAdditive)
                    && set.contains(Axiom::PositivelyHomogeneous)
            }
            Check::Additive => set.contains(Axiom::Additive),
        }
    }
}

/// A failing comparison: the sample functions, the scale or shift used,
/// and the grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub sample: usize,
    pub functions: Vec<PiecewiseLinear>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub parameter: Option<f64>,
    pub point: Vec<f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomCheck {
    pub axiom: Check,
    /// Whether the operator is expected to satisfy it.
    pub expected: bool,
    pub pass: bool,
    pub samples: usize,
    /// Smallest slack (`rhs − lhs` for inequalities, `−|lhs − rhs|` for
    /// identities); negative beyond the tolerance means a violation.
    pub worst_slack: f64,
    /// Largest slack, showing strictness of inequalities.
    pub max_slack: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub counterexample: Option<Counterexample>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub operator: String,
    pub config: PropertyConfig,
    pub expected: AxiomSet,
    pub checks: Vec<AxiomCheck>,
    /// Every expected check passes.
    pub pass: bool,
    /// Samples skipped after a numerical failure.
    pub failures: Vec<String>,
}

impl PropertyReport {
    pub fn check(&self, axiom: Check) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.axiom == axiom)
    }

    pub fn has_failures(&self) -> bool {
        !self.failures.is_empty()
    }
}

struct Sample {
    f: PiecewiseLinear,
    g: PiecewiseLinear,
    p: PiecewiseLinear,
    q: PiecewiseLinear,
    shift: f64,
}

/// One comparison at one point.
struct Comparison {
    check: Check,
    equality: bool,
    lhs: f64,
    rhs: f64,
    error: f64,
    parameter: Option<f64>,
    which: [bool; 4],
}

impl Comparison {
    fn slack(&self) -> f64 {
        if self.equality {
            -(self.lhs - self.rhs).abs()
        } else {
            self.rhs - self.lhs
        }
    }
}

const F: [bool; 4] = [true, false, false, false];
const FG: [bool; 4] = [true, true, false, false];
const P: [bool; 4] = [false, false, true, false];
const PQ: [bool; 4] = [false, false, true, true];

fn generate(cfg: &PropertyConfig) -> Vec<Sample> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let lo = cfg.window.lo.iter().sum::<f64>() / cfg.window.dim() as f64;
    let hi = cfg.window.hi.iter().sum::<f64>() / cfg.window.dim() as f64;
    (0..cfg.samples)
        .map(|_| {
            let shape = PiecewiseLinear::random_shape(&mut rng);
            let f = PiecewiseLinear::nondecreasing(&mut rng, shape, lo, hi);
            let g = PiecewiseLinear::nondecreasing(&mut rng, shape, lo, hi);
            let p = PiecewiseLinear::signed(&mut rng, lo, hi);
            let q = PiecewiseLinear::signed(&mut rng, lo, hi);
            let shift = rand::Rng::gen_range(&mut rng, 0.0..=2.0);
            Sample { f, g, p, q, shift }
        })
        .collect()
}

fn comparisons(
    op: &dyn Approximator,
    s: &Sample,
    one: &[Evaluation],
    points: &[Vec<f64>],
) -> Result<Vec<Vec<Comparison>>> {
    let dim = op.dim();
    let (f, g, p, q) = (
        s.f.to_func(dim),
        s.g.to_func(dim),
        s.p.to_func(dim),
        s.q.to_func(dim),
    );
    let mut funcs: Vec<Func> = vec![
        f.clone(),
        g.clone(),
        f.add(&g),
        f.shifted(s.shift),
        p.clone(),
        q.clone(),
        p.add(&q),
        p.sub(&q).abs(),
        p.max(&q),
    ];
    let scaled_from = funcs.len();
    funcs.extend(HOMOGENEITY_SCALES.iter().map(|&a| p.scaled(a)));
    let t: Vec<Vec<Evaluation>> = funcs
        .iter()
        .map(|h| op.evaluate_many(h, points))
        .collect::<Result<_>>()?;
    let [tf, tg, tfg, tfc, tp, tq, tpq, tabs, tmax] = [0, 1, 2, 3, 4, 5, 6, 7, 8].map(|i| &t[i]);

    Ok((0..points.len())
        .map(|x| {
            let mut out = vec![
                Comparison {
                    check: Check::Monotone,
                    equality: false,
                    lhs: tp[x].value,
                    rhs: tmax[x].value,
                    error: tp[x].error + tmax[x].error,
                    parameter: None,
                    which: PQ,
                },
                Comparison {
                    check: Check::Monotone,
                    equality: false,
                    lhs: tq[x].value,
                    rhs: tmax[x].value,
                    error: tq[x].error + tmax[x].error,
                    parameter: None,
                    which: PQ,
                },
                Comparison {
                    check: Check::Subadditive,
                    equality: false,
                    lhs: tpq[x].value,
                    rhs: tp[x].value + tq[x].value,
                    error: tpq[x].error + tp[x].error + tq[x].error,
                    parameter: None,
                    which: PQ,
                },
                Comparison {
                    check: Check::Additive,
                    equality: true,
                    lhs: tpq[x].value,
                    rhs: tp[x].value + tq[x].value,
                    error: tpq[x].error + tp[x].error + tq[x].error,
                    parameter: None,
                    which: PQ,
                },
                Comparison {
                    check: Check::ComonotoneAdditive,
                    equality: true,
                    lhs: tfg[x].value,
                    rhs: tf[x].value + tg[x].value,
                    error: tfg[x].error + tf[x].error + tg[x].error,
                    parameter: None,
                    which: FG,
                },
                Comparison {
                    check: Check::AbsDifference,
                    equality: false,
                    lhs: (tp[x].value - tq[x].value).abs(),
                    rhs: tabs[x].value,
                    error: tp[x].error + tq[x].error + tabs[x].error,
                    parameter: None,
                    which: PQ,
                },
                Comparison {
                    check: Check::Translation,
                    equality: true,
                    lhs: tfc[x].value,
                    rhs: tf[x].value + s.shift * one[x].value,
                    error: tfc[x].error + tf[x].error + s.shift * one[x].error,
                    parameter: Some(s.shift),
                    which: F,
                },
            ];
            for (j, &a) in HOMOGENEITY_SCALES.iter().enumerate() {
                let ta = &t[scaled_from + j][x];
                out.push(Comparison {
                    check: Check::PositivelyHomogeneous,
                    equality: true,
                    lhs: ta.value,
                    rhs: a * tp[x].value,
                    error: ta.error + a * tp[x].error,
                    parameter: Some(a),
                    which: P,
                });
            }
            out
        })
        .collect())
}

/// Checks the sublinearity-type axioms of `op` on seeded samples at every
/// point of the window grid, against the expectations in `expected`.
///
/// Comonotone pairs are `φ∘h, ψ∘h` with nondecreasing piecewise-linear
/// `φ, ψ`; the other checks use independent signed samples.
pub fn verify_properties(
    op: &dyn Approximator,
    expected: &AxiomSet,
    cfg: &PropertyConfig,
) -> Result<PropertyReport> {
    if cfg.samples == 0 {
        return Err(Error::usage("need at least one sample"));
    }
    if !(cfg.tolerance >= 0.0) {
        return Err(Error::usage("tolerance must be nonnegative"));
    }
    check_window(op, &cfg.window)?;
    let points = cfg.window.points();
    let one = op.evaluate_many(&Func::constant(op.dim(), 1.0), &points)?;
    let samples = generate(cfg);

    let results: Vec<Result<Vec<Vec<Comparison>>>> = samples
        .par_iter()
        .map(|s| comparisons(op, s, &one, &points))
        .collect();

    struct Acc {
        samples: usize,
        worst: f64,
        max: f64,
        worst_violation: f64,
        counterexample: Option<Counterexample>,
    }
    let mut acc: Vec<Acc> = Check::ALL
        .iter()
        .map(|_| Acc {
            samples: 0,
            worst: f64::INFINITY,
            max: f64::NEG_INFINITY,
            worst_violation: 0.0,
            counterexample: None,
        })
        .collect();
    let mut failures = Vec::new();
    for (i, (s, r)) in samples.iter().zip(results).enumerate() {
        let rows = match r {
            Ok(rows) => rows,
            Err(e) if e.is_convergence() => {
                failures.push(format!("sample {i}: {e}"));
                continue;
            }
            Err(e) => return Err(e),
        };
        for a in acc.iter_mut() {
            a.samples += 1;
        }
        for (x, row) in points.iter().zip(rows) {
            for c in row {
                let a = &mut acc[Check::ALL.iter().position(|k| *k == c.check).unwrap()];
                let slack = c.slack();
                let tol = cfg.tolerance + c.error;
                a.worst = a.worst.min(slack);
                a.max = a.max.max(slack);
                let violation = -slack - tol;
                if violation > a.worst_violation
                    || (!slack.is_finite() && a.counterexample.is_none())
                {
                    a.worst_violation = violation;
                    let all = [&s.f, &s.g, &s.p, &s.q];
                    a.counterexample = Some(Counterexample {
                        sample: i,
                        functions: all
                            .iter()
                            .zip(c.which)
                            .filter(|p| p.1)
                            .map(|p| (*p.0).clone())
                            .collect(),
                        parameter: c.parameter,
                        point: x.clone(),
                        lhs: c.lhs,
                        rhs: c.rhs,
                        tolerance: tol,
                    });
                }
            }
        }
    }

    let checks: Vec<AxiomCheck> = Check::ALL
        .iter()
        .zip(acc)
        .map(|(&axiom, a)| AxiomCheck {
            axiom,
            expected: axiom.expected(expected),
            pass: a.counterexample.is_none() && a.samples > 0,
            samples: a.samples,
            worst_slack: if a.samples > 0 { a.worst } else { 0.0 },
            max_slack: if a.samples > 0 { a.max } else { 0.0 },
            counterexample: a.counterexample,
        })
        .collect();
    let pass = checks.iter().all(|c| !c.expected || c.pass);
    Ok(PropertyReport {
        operator: op.name(),
        config: cfg.clone(),
        expected: expected.clone(),
        checks,
        pass,
        failures,
    })
}
