use std::str::FromStr;

use choquet_core::korovkin::WindowShape;
use choquet_core::{
    Capacity, CompactWindow, Monotonicity, OperatorFamily, QuadratureConfig, TestSetVariant,
};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Grid cells per axis used by `properties` when no `--cells` is given.
pub const PROPERTY_CELLS: usize = 16;

/// Everything needed to reproduce a run. Echoed as `meta.config` with all
/// defaults filled in, and accepted back through `--config`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    pub format: Format,
    /// `None` writes to stdout.
    pub out: Option<String>,
    pub seed: u64,
    pub quadrature: QuadratureConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Command {
    Integrate {
        capacity: String,
        function: String,
        window: [f64; 2],
        hint: Monotonicity,
    },
    OperatorEval {
        family: OperatorFamily,
        n: Option<usize>,
        h: Option<f64>,
        capacity: Option<String>,
        function: String,
        points: Vec<Vec<f64>>,
    },
    Converge {
        family: OperatorFamily,
        capacity: Option<String>,
        n: Vec<usize>,
        window: CompactWindow,
        tests: TestSetVariant,
        extra: Vec<String>,
        hypothesis_threshold: f64,
        threshold: f64,
    },
    Properties {
        family: OperatorFamily,
        n: Option<usize>,
        h: Option<f64>,
        capacity: Option<String>,
        window: CompactWindow,
        samples: usize,
        tolerance: f64,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Integrate { .. } => "integrate",
            Command::OperatorEval { .. } => "operator eval",
            Command::Converge { .. } => "converge",
            Command::Properties { .. } => "properties",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(CliError::usage(format!(
                "unknown format '{s}'; valid: json, csv"
            ))),
        }
    }
}

/// Capacity used when a Choquet family is given none.
pub fn default_capacity(family: OperatorFamily) -> Option<&'static str> {
    match family {
        OperatorFamily::BernsteinKc => Some("lebesgue:[0,1]:pow:0.5"),
        OperatorFamily::SzaszKc | OperatorFamily::BaskakovKc => Some("lebesgue:[0,inf]:pow:0.5"),
        OperatorFamily::DurrmeyerChoquetSimplex => Some("lebesgue-simplex:2:pow:0.5"),
        _ => None,
    }
}

/// Parses the capacity, falling back to the family default, and returns
/// it with its canonical spelling.
pub fn resolve_capacity(
    family: OperatorFamily,
    spec: Option<&str>,
) -> Result<Option<(Capacity, String)>, CliError> {
    let spec = match spec.or_else(|| default_capacity(family)) {
        Some(s) => s,
        None => return Ok(None),
    };
    let cap = Capacity::from_str(spec)?;
    let canon = cap.to_string();
    Ok(Some((cap, canon)))
}

/// Number of variables the family acts on.
pub fn family_dim(family: OperatorFamily, cap: Option<&Capacity>) -> usize {
    match (family, cap) {
        (OperatorFamily::DurrmeyerChoquetSimplex, Some(c)) => c.base().dim(),
        _ => 1,
    }
}

/// `a,b`, `a,b;c,d;...` for a box, or `simplex`.
pub fn parse_window(
    src: &str,
    dim: usize,
    cells: Option<usize>,
) -> Result<CompactWindow, CliError> {
    let window = if src.trim() == "simplex" {
        CompactWindow::simplex(dim)?
    } else {
        let mut lo = Vec::new();
        let mut hi = Vec::new();
        for axis in src.split(';') {
            let v = parse_list::<f64>(axis, "window")?;
            if v.len() != 2 {
                return Err(CliError::usage(format!(
                    "window axis '{axis}' needs two bounds a,b"
                )));
            }
            lo.push(v[0]);
            hi.push(v[1]);
        }
        CompactWindow::boxed(lo, hi)?
    };
    match cells {
        Some(c) => Ok(window.with_cells(c)?),
        None => Ok(window),
    }
}

/// The window used when none is given.
pub fn default_window(dim: usize, cells: Option<usize>) -> Result<CompactWindow, CliError> {
    let w = if dim == 1 {
        CompactWindow::interval(0.0, 1.0)?
    } else {
        CompactWindow::simplex(dim)?
    };
    match cells {
        Some(c) => Ok(w.with_cells(c)?),
        None => Ok(w),
    }
}

pub fn parse_list<T: FromStr>(src: &str, what: &str) -> Result<Vec<T>, CliError> {
    src.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| CliError::usage(format!("invalid {what} entry '{}'", s.trim())))
        })
        .collect()
}

/// Points separated by `;` with comma-separated coordinates. Without `;`,
/// a one-variable operator reads each comma entry as a point.
pub fn parse_points(src: &str, dim: usize) -> Result<Vec<Vec<f64>>, CliError> {
    let points: Vec<Vec<f64>> = if src.contains(';') {
        src.split(';')
            .filter(|s| !s.trim().is_empty())
            .map(|p| parse_list(p, "point"))
            .collect::<Result<_, _>>()?
    } else if dim == 1 {
        parse_list::<f64>(src, "point")?
            .into_iter()
            .map(|x| vec![x])
            .collect()
    } else {
        vec![parse_list(src, "point")?]
    };
    if let Some(p) = points.iter().find(|p| p.len() != dim) {
        return Err(CliError::usage(format!(
            "point {p:?} needs {dim} coordinates"
        )));
    }
    Ok(points)
}

pub fn parse_hint(src: &str) -> Result<Monotonicity, CliError> {
    match src {
        "inc" | "nondecreasing" => Ok(Monotonicity::Nondecreasing),
        "dec" | "nonincreasing" => Ok(Monotonicity::Nonincreasing),
        "none" | "unknown" => Ok(Monotonicity::Unknown),
        _ => Err(CliError::usage(format!(
            "unknown hint '{src}'; valid: inc, dec, none"
        ))),
    }
}

pub fn window_label(w: &CompactWindow) -> String {
    match w.shape {
        WindowShape::Simplex => format!("simplex({})", w.dim()),
        WindowShape::Box => {
            w.lo.iter()
                .zip(&w.hi)
                .map(|(a, b)| format!("[{a},{b}]"))
                .collect::<Vec<_>>()
                .join("x")
        }
    }
}
