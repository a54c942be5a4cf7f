use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    check_window, nonincreasing, rates, strictly_decreasing, sup_error_at, Builder, CompactWindow,
    TestFunction, TestFunctionSet,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(pass: bool) -> Self {
        if pass {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    /// Strictly increasing, at least three rungs.
    pub n_list: Vec<usize>,
    pub tests: TestFunctionSet,
    pub window: CompactWindow,
    pub extra: Vec<TestFunction>,
    pub hypothesis_threshold: f64,
    pub conclusion_threshold: f64,
}

impl SuiteConfig {
    pub fn new(n_list: Vec<usize>, tests: TestFunctionSet, window: CompactWindow) -> Self {
        Self {
            n_list,
            tests,
            window,
            extra: Vec::new(),
            hypothesis_threshold: 0.02,
            conclusion_threshold: 0.1,
        }
    }

    pub fn with_extra(mut self, extra: Vec<TestFunction>) -> Self {
        self.extra = extra;
        self
    }

    pub fn with_thresholds(mut self, hypothesis: f64, conclusion: f64) -> Self {
        self.hypothesis_threshold = hypothesis;
        self.conclusion_threshold = conclusion;
        self
    }

    fn validate(&self) -> Result<()> {
        let ns = &self.n_list;
        if ns.len() < 3 {
            return Err(Error::usage(format!(
                "n ladder needs at least 3 rungs, got {}",
                ns.len()
            )));
        }
        if ns[0] == 0 || ns.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::usage(format!(
                "n ladder must be positive and strictly increasing, got {ns:?}"
            )));
        }
        if !(self.hypothesis_threshold > 0.0 && self.conclusion_threshold > 0.0) {
            return Err(Error::usage("thresholds must be positive"));
        }
        if self.tests.dim != self.window.dim() {
            return Err(Error::usage("test set and window dimensions differ"));
        }
        if let Some(f) = self
            .extra
            .iter()
            .find(|f| f.func.dim() != self.window.dim())
        {
            return Err(Error::usage(format!(
                "extra function '{}' has the wrong dimension",
                f.name
            )));
        }
        Ok(())
    }
}

/// One rung of an error ladder; `sup_error` is absent when evaluation
/// failed numerically, with the reason in `failure`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorPoint {
    pub n: usize,
    pub sup_error: Option<f64>,
    pub error_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionSeries {
    #[serde(rename = "fn")]
    pub name: String,
    /// For extra functions: whether `f ≥ 0` on the grid.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub nonnegative: Option<bool>,
    pub errors: Vec<ErrorPoint>,
    pub rates: Vec<Option<f64>>,
    pub nonincreasing: bool,
    pub strictly_decreasing: bool,
    pub below_threshold: bool,
    pub verdict: Verdict,
}

impl FunctionSeries {
    pub fn final_error(&self) -> Option<f64> {
        self.errors.last().and_then(|e| e.sup_error)
    }

    fn from_points(
        name: String,
        nonnegative: Option<bool>,
        ns: &[usize],
        errors: Vec<ErrorPoint>,
        threshold: f64,
    ) -> Self {
        let values: Vec<Option<f64>> = errors.iter().map(|e| e.sup_error).collect();
        let complete: Option<Vec<f64>> = values.iter().copied().collect();
        let (noninc, strict, below) = match &complete {
            Some(v) => (
                nonincreasing(v),
                strictly_decreasing(v),
                v.last().is_some_and(|&e| e < threshold),
            ),
            None => (false, false, false),
        };
        Self {
            name,
            nonnegative,
            rates: rates(ns, &values),
            errors,
            nonincreasing: noninc,
            strictly_decreasing: strict,
            below_threshold: below,
            verdict: Verdict::from_bool(complete.is_some() && noninc && below),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub operators: Vec<String>,
    pub window: CompactWindow,
    pub n_list: Vec<usize>,
    pub tests: TestFunctionSet,
    pub hypothesis_threshold: f64,
    pub conclusion_threshold: f64,
    pub hypothesis: Vec<FunctionSeries>,
    pub conclusion: Vec<FunctionSeries>,
    pub hypothesis_verdict: Verdict,
    /// Passes vacuously when there are no extra functions.
    pub conclusion_verdict: Verdict,
    pub conclusion_nonnegative: Option<Verdict>,
    pub conclusion_signed: Option<Verdict>,
    pub implication: String,
    pub notes: Vec<String>,
}

impl ConvergenceReport {
    /// True when some rung failed numerically.
    pub fn has_failures(&self) -> bool {
        self.hypothesis
            .iter()
            .chain(&self.conclusion)
            .any(|s| s.errors.iter().any(|e| e.failure.is_some()))
    }
}

/// Runs every test and extra function through every rung of the ladder.
///
/// Numerical failures become marked rows; malformed input and windows
/// outside the operator domain are errors.
pub fn run_korovkin_suite(build: &Builder<'_>, cfg: &SuiteConfig) -> Result<ConvergenceReport> {
    cfg.validate()?;
    let tests = cfg.tests.functions(&cfg.window)?;
    let ops = cfg
        .n_list
        .iter()
        .map(|&n| build(n))
        .collect::<Result<Vec<_>>>()?;
    for op in &ops {
        check_window(op.as_ref(), &cfg.window)?;
    }
    let points = cfg.window.points();
    let all: Vec<&TestFunction> = tests.iter().chain(&cfg.extra).collect();
    for f in &all {
        if let Some(x) = points.iter().find(|x| !f.func.at(x).is_finite()) {
            return Err(Error::domain(format!(
                "'{}' is not finite at {x:?}",
                f.name
            )));
        }
    }

    let tasks: Vec<(usize, usize)> = (0..all.len())
        .flat_map(|i| (0..ops.len()).map(move |j| (i, j)))
        .collect();
    let results: Vec<Result<ErrorPoint>> = tasks
        .par_iter()
        .map(|&(i, j)| {
            let n = cfg.n_list[j];
            match sup_error_at(ops[j].as_ref(), &all[i].func, &points) {
                Ok(e) => Ok(ErrorPoint {
                    n,
                    sup_error: Some(e.sup_error),
                    error_bound: Some(e.error_bound),
                    failure: None,
                }),
                Err(err) if err.is_convergence() => Ok(ErrorPoint {
                    n,
                    sup_error: None,
                    error_bound: None,
                    failure: Some(err.to_string()),
                }),
                Err(err) => Err(err),
            }
        })
        .collect();
    let mut results = results.into_iter().collect::<Result<Vec<_>>>()?.into_iter();

    let mut series = Vec::with_capacity(all.len());
    for (i, f) in all.iter().enumerate() {
        let rows: Vec<ErrorPoint> = results.by_ref().take(ops.len()).collect();
        let (nonneg, threshold) = if i < tests.len() {
            (None, cfg.hypothesis_threshold)
        } else {
            (
                Some(points.iter().all(|x| f.func.at(x) >= 0.0)),
                cfg.conclusion_threshold,
            )
        };
        series.push(FunctionSeries::from_points(
            f.name.clone(),
            nonneg,
            &cfg.n_list,
            rows,
            threshold,
        ));
    }
    let conclusion = series.split_off(tests.len());
    let hypothesis = series;

    let h = hypothesis.iter().all(|f| f.verdict.passed());
    let c = conclusion.iter().all(|f| f.verdict.passed());
    let split = |want: bool| {
        let part: Vec<_> = conclusion
            .iter()
            .filter(|s| s.nonnegative == Some(want))
            .collect();
        (!part.is_empty()).then(|| Verdict::from_bool(part.iter().all(|f| f.verdict.passed())))
    };

    let mut notes = Vec::new();
    for s in hypothesis.iter().filter(|s| !s.verdict.passed()) {
        let last = s
            .final_error()
            .map_or("failed".to_string(), |e| format!("{e:.6e}"));
        notes.push(format!(
            "hypothesis fails on {}: final sup error {last}",
            s.name
        ));
        if s.name == "e0" {
            notes.push("e0 is not reproduced: T_n(e0) does not tend to 1".to_string());
        }
    }
    if conclusion.iter().any(|s| s.nonnegative == Some(false)) {
        notes.push(
            "signed extra functions are reported separately from nonnegative ones".to_string(),
        );
    }
    let implication = match (h, conclusion.is_empty(), c) {
        (false, _, _) => "hypothesis failed; the implication H => C is not instantiated",
        (true, true, _) => "hypothesis passed; no extra functions, conclusion untested",
        (true, false, true) => "H => C instantiated: hypothesis and conclusion both pass",
        (true, false, false) => "hypothesis passed but the conclusion failed at this resolution",
    }
    .to_string();

    Ok(ConvergenceReport {
        operators: ops.iter().map(|o| o.name()).collect(),
        window: cfg.window.clone(),
        n_list: cfg.n_list.clone(),
        tests: cfg.tests,
        hypothesis_threshold: cfg.hypothesis_threshold,
        conclusion_threshold: cfg.conclusion_threshold,
        hypothesis_verdict: Verdict::from_bool(h),
        conclusion_verdict: Verdict::from_bool(c),
        conclusion_nonnegative: split(true),
        conclusion_signed: split(false),
        implication,
        notes,
        hypothesis,
        conclusion,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::capacity::Capacity;
    use crate::choquet::QuadratureConfig;
    use crate::func::Func;
    use crate::korovkin::{family_builder, TestSetVariant};
    use crate::operators::{
        Approximator, Negated, OperatorFamily, OperatorInstance, OperatorParam,
    };

    fn window(cells: usize) -> CompactWindow {
        CompactWindow::interval(0.0, 1.0)
            .unwrap()
            .with_cells(cells)
            .unwrap()
    }

    #[test]
    fn ladder_preconditions() {
        let b = family_builder(
            OperatorFamily::ClassicalBernstein,
            None,
            QuadratureConfig::default(),
        );
        let tests = TestFunctionSet::new(1, TestSetVariant::Reduced);
        for ns in [vec![8, 16], vec![8, 16, 16], vec![0, 1, 2]] {
            let cfg = SuiteConfig::new(ns, tests, window(8));
            assert!(matches!(run_korovkin_suite(&b, &cfg), Err(Error::Usage(_))));
        }
    }

    #[test]
    fn classical_bernstein_converges() {
        let b = family_builder(
            OperatorFamily::ClassicalBernstein,
            None,
            QuadratureConfig::default(),
        );
        let extra = vec![TestFunction::new("abs", Func::unary(|t| (t - 0.5).abs()))];
        let cfg = SuiteConfig::new(
            vec![16, 32, 64],
            TestFunctionSet::new(1, TestSetVariant::Full),
            window(64),
        )
        .with_extra(extra);
        let r = run_korovkin_suite(&b, &cfg).unwrap();
        assert_eq!(r.hypothesis_verdict, Verdict::Pass);
        assert_eq!(r.conclusion_verdict, Verdict::Pass);
        assert_eq!(r.conclusion_nonnegative, Some(Verdict::Pass));
        assert_eq!(r.conclusion_signed, None);
        let e2 = r.hypothesis.iter().find(|s| s.name == "e2").unwrap();
        assert!((e2.final_error().unwrap() - 1.0 / 256.0).abs() < 1e-12);
        assert!((e2.rates[0].unwrap() - 1.0).abs() < 1e-9);
        assert!(r.implication.starts_with("H => C"));
    }

    #[test]
    fn negated_bernstein_fails_at_e0() {
        let b = |n: usize| -> Result<Arc<dyn Approximator>> {
            let inst = OperatorInstance::new(
                OperatorFamily::ClassicalBernstein,
                OperatorParam::Degree(n),
                None,
            )?;
            Ok(Arc::new(Negated(inst)))
        };
        let cfg = SuiteConfig::new(
            vec![4, 8, 16],
            TestFunctionSet::new(1, TestSetVariant::Reduced),
            window(16),
        );
        let r = run_korovkin_suite(&b, &cfg).unwrap();
        assert_eq!(r.hypothesis_verdict, Verdict::Fail);
        let e0 = &r.hypothesis[0];
        assert_eq!(e0.verdict, Verdict::Fail);
        assert!((e0.final_error().unwrap() - 2.0).abs() < 1e-12);
        assert!(r.notes.iter().any(|n| n.contains("e0")));
    }

    #[test]
    fn choquet_families_reproduce_e0() {
        let unit = Capacity::sqrt_lebesgue(0.0, 1.0).unwrap();
        let half = Capacity::sqrt_lebesgue(0.0, f64::INFINITY).unwrap();
        let cases = [
            (OperatorFamily::BernsteinKc, unit),
            (OperatorFamily::SzaszKc, half.clone()),
            (OperatorFamily::BaskakovKc, half),
        ];
        for (family, cap) in cases {
            let b = family_builder(family, Some(cap), QuadratureConfig::default());
            let cfg = SuiteConfig::new(
                vec![2, 4, 8],
                TestFunctionSet::new(1, TestSetVariant::Reduced),
                window(32),
            );
            let r = run_korovkin_suite(&b, &cfg).unwrap();
            for row in &r.hypothesis[0].errors {
                assert!(row.sup_error.unwrap() < 1e-9, "{family} {row:?}");
            }
        }
    }

    #[test]
    fn window_outside_domain_is_an_error() {
        let b = family_builder(
            OperatorFamily::ClassicalBernstein,
            None,
            QuadratureConfig::default(),
        );
        let w = CompactWindow::interval(0.0, 2.0)
            .unwrap()
            .with_cells(8)
            .unwrap();
        let cfg = SuiteConfig::new(
            vec![2, 4, 8],
            TestFunctionSet::new(1, TestSetVariant::Reduced),
            w,
        );
        assert!(matches!(
            run_korovkin_suite(&b, &cfg),
            Err(Error::Domain(_))
        ));
    }
}
