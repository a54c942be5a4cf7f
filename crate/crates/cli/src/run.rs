use std::collections::BTreeMap;
use std::str::FromStr;

use choquet_core::korovkin::{
    family_builder, run_korovkin_suite, verify_properties, AxiomCheck, FunctionSeries,
    PropertyConfig, SuiteConfig, Verdict,
};
use choquet_core::operators::{operator_axioms, AxiomSet};
use choquet_core::{
    choquet_numeric, parse_function, Approximator, Capacity, CompactWindow, Error, Integrand,
    OperatorFamily, OperatorInstance, OperatorParam, QuadratureConfig, TestFunction,
    TestFunctionSet,
};
use serde::Serialize;

use crate::config::{family_dim, window_label, Command, RunConfig};
use crate::CliError;

#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub config: RunConfig,
    pub seed: u64,
    pub versions: BTreeMap<&'static str, &'static str>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub meta: Meta,
    #[serde(flatten)]
    pub body: Body,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Body {
    Integrate {
        result: Integral,
    },
    Eval {
        operator: String,
        function: String,
        evaluations: Vec<PointValue>,
    },
    Converge {
        hypothesis: Vec<FunctionSeries>,
        conclusion: Vec<FunctionSeries>,
        properties: Vec<AxiomCheck>,
        summary: ConvergeSummary,
    },
    Properties {
        hypothesis: Vec<FunctionSeries>,
        conclusion: Vec<FunctionSeries>,
        properties: Vec<AxiomCheck>,
        summary: PropertySummary,
    },
}

/// A value with its error estimate; on a convergence failure the best
/// estimate is kept and `failure` says why.
#[derive(Debug, Clone, Serialize)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PointValue {
    pub x: Vec<f64>,
    pub value: Option<f64>,
    pub error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergeSummary {
    pub operators: Vec<String>,
    pub window: CompactWindow,
    pub n_list: Vec<usize>,
    pub tests: TestFunctionSet,
    pub hypothesis_threshold: f64,
    pub conclusion_threshold: f64,
    pub hypothesis_verdict: Verdict,
    pub conclusion_verdict: Verdict,
    pub conclusion_nonnegative: Option<Verdict>,
    pub conclusion_signed: Option<Verdict>,
    pub implication: String,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PropertySummary {
    pub operator: String,
    pub window: CompactWindow,
    pub expected: AxiomSet,
    pub pass: bool,
    pub failures: Vec<String>,
}

/// A finished run: the report, a one-line summary, and whether any
/// numerical failure was marked in it.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub summary: String,
    pub failed: bool,
}

fn capacity(spec: &Option<String>) -> Result<Option<Capacity>, CliError> {
    spec.as_deref()
        .map(Capacity::from_str)
        .transpose()
        .map_err(CliError::from)
}

fn instance(
    family: OperatorFamily,
    n: Option<usize>,
    h: Option<f64>,
    cap: Option<Capacity>,
    quad: QuadratureConfig,
) -> Result<OperatorInstance, CliError> {
    let param = match (n, h) {
        (Some(n), None) => OperatorParam::Degree(n),
        (None, Some(h)) => OperatorParam::Bandwidth(h),
        _ => return Err(CliError::usage("give exactly one of n and h")),
    };
    Ok(OperatorInstance::new(family, param, cap)?.with_quadrature(quad)?)
}

fn verdict(v: Verdict) -> &'static str {
    if v.passed() {
        "pass"
    } else {
        "fail"
    }
}

/// Runs the configured command.
pub fn execute(cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.quadrature.validate()?;
    let meta = Meta {
        config: cfg.clone(),
        seed: cfg.seed,
        versions: BTreeMap::from([
            ("choquet-cli", env!("CARGO_PKG_VERSION")),
            ("choquet-core", choquet_core::VERSION),
        ]),
    };
    let quad = cfg.quadrature;
    let (body, summary, failed) = match &cfg.command {
        Command::Integrate {
            capacity: spec,
            function,
            window,
            hint,
        } => {
            let cap = Capacity::from_str(spec)?;
            let f = Integrand::new(parse_function(function, 1)?, window[0], window[1])?
                .with_hint(*hint);
            let result = match choquet_numeric(&f, &cap, &quad) {
                Ok(v) => Integral {
                    value: v.value,
                    error: v.error,
                    failure: None,
                },
                Err(Error::Convergence {
                    message,
                    estimate,
                    error,
                }) => Integral {
                    value: estimate,
                    error,
                    failure: Some(message),
                },
                Err(e) => return Err(e.into()),
            };
            let summary = format!("integrate: {} (error {:e})", result.value, result.error);
            let failed = result.failure.is_some();
            (Body::Integrate { result }, summary, failed)
        }
        Command::OperatorEval {
            family,
            n,
            h,
            capacity: spec,
            function,
            points,
        } => {
            let cap = capacity(spec)?;
            let dim = family_dim(*family, cap.as_ref());
            let op = instance(*family, *n, *h, cap, quad)?;
            let f = parse_function(function, dim)?;
            let mut evaluations = Vec::with_capacity(points.len());
            for x in points {
                evaluations.push(match op.evaluate(&f, x) {
                    Ok(v) => PointValue {
                        x: x.clone(),
                        value: Some(v.value),
                        error: Some(v.error),
                        failure: None,
                    },
                    Err(e) if e.is_convergence() => PointValue {
                        x: x.clone(),
                        value: None,
                        error: None,
                        failure: Some(e.to_string()),
                    },
                    Err(e) => return Err(e.into()),
                });
            }
            let failed = evaluations.iter().any(|e| e.failure.is_some());
            let summary = format!(
                "operator eval: {} at {} point(s)",
                op.name(),
                evaluations.len()
            );
            (
                Body::Eval {
                    operator: op.name(),
                    function: function.clone(),
                    evaluations,
                },
                summary,
                failed,
            )
        }
        Command::Converge {
            family,
            capacity: spec,
            n,
            window,
            tests,
            extra,
            hypothesis_threshold,
            threshold,
        } => {
            let cap = capacity(spec)?;
            let dim = window.dim();
            let extra = extra
                .iter()
                .map(|src| Ok(TestFunction::new(src.clone(), parse_function(src, dim)?)))
                .collect::<Result<Vec<_>, CliError>>()?;
            let suite =
                SuiteConfig::new(n.clone(), TestFunctionSet::new(dim, *tests), window.clone())
                    .with_extra(extra)
                    .with_thresholds(*hypothesis_threshold, *threshold);
            let build = family_builder(*family, cap, quad);
            let r = run_korovkin_suite(&build, &suite)?;
            let failed = r.has_failures();
            let summary = format!(
                "converge: {family} on {}: hypothesis {}, conclusion {}",
                window_label(window),
                verdict(r.hypothesis_verdict),
                verdict(r.conclusion_verdict)
            );
            (
                Body::Converge {
                    summary: ConvergeSummary {
                        operators: r.operators,
                        window: r.window,
                        n_list: r.n_list,
                        tests: r.tests,
                        hypothesis_threshold: r.hypothesis_threshold,
                        conclusion_threshold: r.conclusion_threshold,
                        hypothesis_verdict: r.hypothesis_verdict,
                        conclusion_verdict: r.conclusion_verdict,
                        conclusion_nonnegative: r.conclusion_nonnegative,
                        conclusion_signed: r.conclusion_signed,
                        implication: r.implication,
                        notes: r.notes,
                    },
                    hypothesis: r.hypothesis,
                    conclusion: r.conclusion,
                    properties: Vec::new(),
                },
                summary,
                failed,
            )
        }
        Command::Properties {
            family,
            n,
            h,
            capacity: spec,
            window,
            samples,
            tolerance,
        } => {
            let op = instance(*family, *n, *h, capacity(spec)?, quad)?;
            let expected = operator_axioms(&op);
            let pc = PropertyConfig {
                samples: *samples,
                seed: cfg.seed,
                tolerance: *tolerance,
                window: window.clone(),
            };
            let r = verify_properties(&op, &expected, &pc)?;
            let failed = r.has_failures();
            let bad: Vec<&str> = r
                .checks
                .iter()
                .filter(|c| c.expected && !c.pass)
                .map(|c| c.axiom.tag())
                .collect();
            let summary = if bad.is_empty() {
                format!("properties: {} satisfies every expected axiom", r.operator)
            } else {
                format!("properties: {} fails {}", r.operator, bad.join(", "))
            };
            (
                Body::Properties {
                    hypothesis: Vec::new(),
                    conclusion: Vec::new(),
                    properties: r.checks,
                    summary: PropertySummary {
                        operator: r.operator,
                        window: r.config.window,
                        expected: r.expected,
                        pass: r.pass,
                        failures: r.failures,
                    },
                },
                summary,
                failed,
            )
        }
    };
    Ok(Outcome {
        report: Report { meta, body },
        summary,
        failed,
    })
}
