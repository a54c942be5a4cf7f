use crate::config::Format;
use crate::run::{Body, Report};
use crate::CliError;

/// Same shortest round-trip spelling as the JSON output.
fn float(x: f64) -> String {
    serde_json::to_string(&x).unwrap_or_default()
}

fn num(v: Option<f64>) -> String {
    v.map(float).unwrap_or_default()
}

fn coords(x: &[f64]) -> String {
    x.iter().map(|&v| float(v)).collect::<Vec<_>>().join(" ")
}

/// Serializes a report. JSON is pretty-printed with a trailing newline;
/// CSV has one row per `(fn, n)` for convergence reports.
pub fn render(report: &Report, format: Format) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Json => {
            let mut out =
                serde_json::to_vec_pretty(report).map_err(|e| CliError::usage(e.to_string()))?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => csv_table(&report.body),
    }
}

fn csv_table(body: &Body) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut row = |fields: Vec<String>| w.write_record(&fields);
    let written = match body {
        Body::Integrate { result } => row(vec!["value".into(), "error".into(), "failure".into()])
            .and_then(|_| {
                row(vec![
                    float(result.value),
                    float(result.error),
                    result.failure.clone().unwrap_or_default(),
                ])
            }),
        Body::Eval { evaluations, .. } => {
            let mut r = row(vec![
                "x".into(),
                "value".into(),
                "error".into(),
                "failure".into(),
            ]);
            for e in evaluations {
                r = r.and_then(|_| {
                    row(vec![
                        coords(&e.x),
                        num(e.value),
                        num(e.error),
                        e.failure.clone().unwrap_or_default(),
                    ])
                });
            }
            r
        }
        Body::Converge {
            hypothesis,
            conclusion,
            ..
        } => {
            let header = [
                "section",
                "fn",
                "n",
                "sup_error",
                "error_bound",
                "rate",
                "verdict",
                "failure",
            ];
            let mut r = row(header.iter().map(|s| s.to_string()).collect());
            for (section, series) in [("hypothesis", hypothesis), ("conclusion", conclusion)] {
                for s in series {
                    let verdict = if s.verdict.passed() { "pass" } else { "fail" };
                    for (i, e) in s.errors.iter().enumerate() {
                        let rate = if i == 0 { None } else { s.rates[i - 1] };
                        r = r.and_then(|_| {
                            row(vec![
                                section.into(),
                                s.name.clone(),
                                e.n.to_string(),
                                num(e.sup_error),
                                num(e.error_bound),
                                num(rate),
                                verdict.into(),
                                e.failure.clone().unwrap_or_default(),
                            ])
                        });
                    }
                }
            }
            r
        }
        Body::Properties { properties, .. } => {
            let header = [
                "axiom",
                "expected",
                "pass",
                "samples",
                "worst_slack",
                "max_slack",
                "counterexample_sample",
                "counterexample_point",
            ];
            let mut r = row(header.iter().map(|s| s.to_string()).collect());
            for c in properties {
                let (sample, point) = match &c.counterexample {
                    Some(ce) => (ce.sample.to_string(), coords(&ce.point)),
                    None => (String::new(), String::new()),
                };
                r = r.and_then(|_| {
                    row(vec![
                        c.axiom.tag().into(),
                        c.expected.to_string(),
                        c.pass.to_string(),
                        c.samples.to_string(),
                        float(c.worst_slack),
                        float(c.max_slack),
                        sample,
                        point,
                    ])
                });
            }
            r
        }
    };
    written.map_err(|e| CliError::usage(format!("csv: {e}")))?;
    w.into_inner()
        .map_err(|e| CliError::usage(format!("csv: {e}")))
}
