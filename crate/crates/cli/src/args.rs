use std::str::FromStr;

use choquet_core::{Capacity, OperatorFamily, QuadratureConfig, TestSetVariant};
use clap::{Args, Parser, Subcommand};

use crate::config::{
    default_window, family_dim, parse_hint, parse_list, parse_points, parse_window,
    resolve_capacity, Command, Format, RunConfig, PROPERTY_CELLS,
};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "choquet",
    version,
    about = "Choquet integrals, Choquet-type operators and Korovkin checks"
)]
pub struct Cli {
    /// Output path, or `json`/`csv` to pick the format and write to stdout.
    #[arg(long, global = true)]
    pub out: Option<String>,

    /// Report format: json or csv.
    #[arg(long, global = true)]
    pub format: Option<String>,

    /// Seed for sampled property checks.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Suppress the summary line on stderr.
    #[arg(long, global = true)]
    pub quiet: bool,

    /// Replay a run from a config file or from a report's meta block.
    #[arg(long, global = true)]
    pub config: Option<String>,

    #[command(subcommand)]
    pub command: Option<Cmd>,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Choquet integral of a function over a window.
    Integrate(IntegrateArgs),
    /// Operator evaluations.
    #[command(subcommand)]
    Operator(OperatorCmd),
    /// Korovkin convergence suite over an n ladder.
    Converge(ConvergeArgs),
    /// Sampled verification of the operator axioms.
    Properties(PropertiesArgs),
}

#[derive(Debug, Subcommand)]
pub enum OperatorCmd {
    /// Evaluate one operator at a list of points.
    Eval(EvalArgs),
}

#[derive(Debug, Args)]
pub struct QuadArgs {
    /// Absolute tolerance of the level-axis quadrature.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    rel_tol: Option<f64>,
    #[arg(long)]
    max_subdivisions: Option<usize>,
    #[arg(long)]
    scan_resolution: Option<usize>,
    #[arg(long)]
    level_breaks: Option<usize>,
    /// Cells per axis for simplex integration.
    #[arg(long)]
    grid_cells: Option<usize>,
}

impl QuadArgs {
    fn resolve(&self) -> Result<QuadratureConfig, CliError> {
        let d = QuadratureConfig::default();
        let cfg = QuadratureConfig {
            abs_tol: self.tol.unwrap_or(d.abs_tol),
            rel_tol: self.rel_tol.unwrap_or(d.rel_tol),
            max_subdivisions: self.max_subdivisions.unwrap_or(d.max_subdivisions),
            scan_resolution: self.scan_resolution.unwrap_or(d.scan_resolution),
            level_breaks: self.level_breaks.unwrap_or(d.level_breaks),
            grid_cells: self.grid_cells.unwrap_or(d.grid_cells),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct IntegrateArgs {
    /// Capacity, e.g. `lebesgue:[0,1]:pow:0.5`.
    #[arg(long)]
    capacity: String,
    /// Expression in `t`, e.g. `t^2`.
    #[arg(long)]
    function: String,
    /// Integration window `a,b`.
    #[arg(long, allow_hyphen_values = true)]
    window: String,
    /// Monotonicity promise: inc, dec or none.
    #[arg(long)]
    hint: Option<String>,
    #[command(flatten)]
    quad: QuadArgs,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    family: String,
    /// Degree.
    #[arg(long, conflicts_with = "h")]
    n: Option<usize>,
    /// Bandwidth.
    #[arg(long)]
    h: Option<f64>,
    #[arg(long)]
    capacity: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    function: String,
    /// `x1,x2,...`, or `;`-separated points for several variables.
    #[arg(long, allow_hyphen_values = true)]
    points: String,
    #[command(flatten)]
    quad: QuadArgs,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    #[arg(long)]
    family: String,
    #[arg(long)]
    capacity: Option<String>,
    /// Strictly increasing ladder, at least three rungs.
    #[arg(long)]
    n: String,
    /// `a,b`, `a,b;c,d` or `simplex`.
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
    /// Grid cells per axis.
    #[arg(long)]
    cells: Option<usize>,
    /// Test set: reduced (`e0`, `-e1`, `e2`; needs the positive cone) or full.
    #[arg(long, default_value = "reduced")]
    tests: String,
    /// Extra functions for the conclusion, comma-separated.
    #[arg(long, allow_hyphen_values = true)]
    extra: Option<String>,
    /// Final-error threshold for the conclusion.
    #[arg(long, default_value_t = 0.1)]
    threshold: f64,
    /// Final-error threshold for the hypothesis.
    #[arg(long, default_value_t = 0.02)]
    hypothesis_threshold: f64,
    #[command(flatten)]
    quad: QuadArgs,
}

#[derive(Debug, Args)]
pub struct PropertiesArgs {
    #[arg(long)]
    family: String,
    #[arg(long, conflicts_with = "h")]
    n: Option<usize>,
    #[arg(long)]
    h: Option<f64>,
    #[arg(long)]
    capacity: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
    #[arg(long)]
    cells: Option<usize>,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Base tolerance per comparison.
    #[arg(long, default_value_t = 1e-7)]
    tolerance: f64,
    #[command(flatten)]
    quad: QuadArgs,
}

fn family(tag: &str) -> Result<OperatorFamily, CliError> {
    Ok(OperatorFamily::from_str(tag)?)
}

fn window(
    src: Option<&str>,
    dim: usize,
    cells: Option<usize>,
) -> Result<choquet_core::CompactWindow, CliError> {
    match src {
        Some(s) => parse_window(s, dim, cells),
        None => default_window(dim, cells),
    }
}

fn degree_or_bandwidth(
    n: Option<usize>,
    h: Option<f64>,
) -> Result<(Option<usize>, Option<f64>), CliError> {
    match (n, h) {
        (None, None) => Err(CliError::usage("one of --n or --h is required")),
        other => Ok(other),
    }
}

impl Cli {
    /// Resolves the arguments into a fully defaulted config.
    pub fn into_config(self) -> Result<RunConfig, CliError> {
        if let Some(path) = &self.config {
            if self.command.is_some()
                || self.out.is_some()
                || self.format.is_some()
                || self.seed.is_some()
            {
                return Err(CliError::usage(
                    "--config replays a run and takes no other options besides --quiet",
                ));
            }
            return crate::load_config(path);
        }
        let cmd = self.command.ok_or_else(|| {
            CliError::usage(
                "a subcommand is required (integrate, operator eval, converge, properties)",
            )
        })?;

        let mut format = self.format.as_deref().map(Format::from_str).transpose()?;
        let out = match self.out {
            Some(o) if o == "json" || o == "csv" => {
                let f = Format::from_str(&o)?;
                if format.is_some_and(|g| g != f) {
                    return Err(CliError::usage("--out and --format name different formats"));
                }
                format = Some(f);
                None
            }
            Some(o) if o == "-" => None,
            other => other,
        };

        let (command, quadrature) = match cmd {
            Cmd::Integrate(a) => {
                let canon = Capacity::from_str(&a.capacity)?.to_string();
                let w = parse_list::<f64>(&a.window, "window")?;
                if w.len() != 2 {
                    return Err(CliError::usage("--window needs two bounds a,b"));
                }
                let hint = a
                    .hint
                    .as_deref()
                    .map(parse_hint)
                    .transpose()?
                    .unwrap_or_default();
                (
                    Command::Integrate {
                        capacity: canon,
                        function: a.function,
                        window: [w[0], w[1]],
                        hint,
                    },
                    a.quad.resolve()?,
                )
            }
            Cmd::Operator(OperatorCmd::Eval(a)) => {
                let fam = family(&a.family)?;
                let (n, h) = degree_or_bandwidth(a.n, a.h)?;
                let cap = resolve_capacity(fam, a.capacity.as_deref())?;
                let dim = family_dim(fam, cap.as_ref().map(|c| &c.0));
                (
                    Command::OperatorEval {
                        family: fam,
                        n,
                        h,
                        capacity: cap.map(|c| c.1),
                        function: a.function,
                        points: parse_points(&a.points, dim)?,
                    },
                    a.quad.resolve()?,
                )
            }
            Cmd::Converge(a) => {
                let fam = family(&a.family)?;
                let cap = resolve_capacity(fam, a.capacity.as_deref())?;
                let dim = family_dim(fam, cap.as_ref().map(|c| &c.0));
                let extra = match &a.extra {
                    Some(s) => s
                        .split(',')
                        .map(|e| e.trim().to_string())
                        .filter(|e| !e.is_empty())
                        .collect(),
                    None => Vec::new(),
                };
                (
                    Command::Converge {
                        family: fam,
                        capacity: cap.map(|c| c.1),
                        n: parse_list(&a.n, "n")?,
                        window: window(a.window.as_deref(), dim, a.cells)?,
                        tests: TestSetVariant::from_str(&a.tests)?,
                        extra,
                        hypothesis_threshold: a.hypothesis_threshold,
                        threshold: a.threshold,
                    },
                    a.quad.resolve()?,
                )
            }
            Cmd::Properties(a) => {
                let fam = family(&a.family)?;
                let (n, h) = degree_or_bandwidth(a.n, a.h)?;
                let cap = resolve_capacity(fam, a.capacity.as_deref())?;
                let dim = family_dim(fam, cap.as_ref().map(|c| &c.0));
                (
                    Command::Properties {
                        family: fam,
                        n,
                        h,
                        capacity: cap.map(|c| c.1),
                        window: window(
                            a.window.as_deref(),
                            dim,
                            Some(a.cells.unwrap_or(PROPERTY_CELLS)),
                        )?,
                        samples: a.samples,
                        tolerance: a.tolerance,
                    },
                    a.quad.resolve()?,
                )
            }
        };
        Ok(RunConfig {
            command,
            format: format.unwrap_or_default(),
            out,
            seed: self.seed.unwrap_or(42),
            quadrature,
        })
    }
}
