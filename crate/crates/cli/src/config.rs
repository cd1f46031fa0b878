//! Run configuration: JSON config file, `--tol-<name>` overrides and the
//! small string syntaxes used for loops, sweeps and subspaces.

use std::ffi::OsString;
use std::ops::Range;
use std::path::{Path, PathBuf};

use eigenloop::models::ModelSpec;
use eigenloop::stone::SurfaceSweep;
use eigenloop::transport::ParameterLoop;
use eigenloop::Config;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::format::{read_points, read_to_string};

/// Contents of a `--config` file. Every field is optional; command-line
/// flags take precedence.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// If set, must name the subcommand being run.
    pub subcommand: Option<String>,
    pub input: Option<PathBuf>,
    pub model: Option<ModelSpec>,
    #[serde(rename = "loop")]
    pub loop_spec: Option<String>,
    pub samples: Option<usize>,
    pub subspace: Option<String>,
    pub bands: Option<String>,
    pub interior: Option<PathBuf>,
    pub sweep: Option<SurfaceSweep>,
    pub band: Option<usize>,
    pub reverse: Option<bool>,
    pub tolerances: Option<Config>,
    pub diag: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub seed: Option<u64>,
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = read_to_string(path)?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

/// Splits `--tol-<name> <value>` and `--tol-<name>=<value>` out of the
/// argument list.
pub fn extract_tolerances(args: Vec<OsString>) -> CliResult<(Vec<OsString>, Vec<(String, f64)>)> {
    let mut rest = Vec::with_capacity(args.len());
    let mut overrides = Vec::new();
    let mut it = args.into_iter();
    while let Some(arg) = it.next() {
        let Some(s) = arg.to_str().and_then(|s| s.strip_prefix("--tol-")) else {
            if arg == "--" {
                rest.push(arg);
                rest.extend(it);
                break;
            }
            rest.push(arg);
            continue;
        };
        let (name, value) = match s.split_once('=') {
            Some((n, v)) => (n.to_string(), v.to_string()),
            None => {
                let v = it
                    .next()
                    .and_then(|v| v.into_string().ok())
                    .ok_or_else(|| CliError::Usage(format!("--tol-{s} needs a value")))?;
                (s.to_string(), v)
            }
        };
        let value: f64 = value
            .parse()
            .map_err(|_| CliError::Config(format!("--tol-{name}: '{value}' is not a number")))?;
        overrides.push((name, value));
    }
    Ok((rest, overrides))
}

/// Applies `--tol-<name>` overrides. `name` may omit a leading `tol_`
/// (`--tol-orth` sets `tol_orth`); dashes stand for underscores.
pub fn apply_tolerances(cfg: &mut Config, overrides: &[(String, f64)]) -> CliResult<()> {
    for (name, value) in overrides {
        let key = name.replace('-', "_");
        let ok = cfg.set(&format!("tol_{key}"), *value) || cfg.set(&key, *value);
        if !ok {
            return Err(CliError::Config(format!(
                "unknown or invalid tolerance --tol-{name} {value}"
            )));
        }
    }
    Ok(())
}

fn numbers(spec: &str, what: &str, count: usize) -> CliResult<Vec<f64>> {
    let xs: Vec<f64> = spec
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::parse(what, format!("'{spec}' is not a list of numbers")))?;
    if xs.len() != count {
        return Err(CliError::parse(
            what,
            format!("expected {count} numbers, got {}", xs.len()),
        ));
    }
    Ok(xs)
}

/// `circle:cx,cy,r`, `ellipse:cx,cy,a,b,tilt` or `polyline:<points.json>`.
pub fn parse_loop(spec: &str, samples: usize) -> CliResult<ParameterLoop> {
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| CliError::parse("--loop", format!("'{spec}' has no kind prefix")))?;
    let l = match kind {
        "circle" => {
            let x = numbers(rest, "--loop", 3)?;
            ParameterLoop::circle(x[0], x[1], x[2], samples)?
        }
        "ellipse" => {
            let x = numbers(rest, "--loop", 5)?;
            ParameterLoop::ellipse([x[0], x[1]], [x[2], x[3]], x[4], samples)?
        }
        "polyline" => {
            let mut vertices = read_points(Path::new(rest))?;
            if vertices.first() != vertices.last() {
                let first = vertices[0].clone();
                vertices.push(first);
            }
            ParameterLoop::new(
                eigenloop::transport::LoopGeometry::Polyline { vertices },
                samples,
            )?
        }
        other => {
            return Err(CliError::parse(
                "--loop",
                format!("unknown loop kind '{other}'"),
            ))
        }
    };
    Ok(l)
}

/// `cx,cy,cz,r`.
pub fn parse_sphere(spec: &str, n_sweep: usize, n_loop: usize) -> CliResult<SurfaceSweep> {
    let x = numbers(spec, "--sphere", 4)?;
    Ok(SurfaceSweep::sphere(
        [x[0], x[1], x[2]],
        x[3],
        n_sweep,
        n_loop,
    )?)
}

/// `a..b`, half open.
pub fn parse_range(spec: &str) -> CliResult<Range<usize>> {
    let (a, b) = spec
        .split_once("..")
        .ok_or_else(|| CliError::parse("--bands", format!("'{spec}' is not a range a..b")))?;
    let a: usize = a
        .trim()
        .parse()
        .map_err(|_| CliError::parse("--bands", format!("bad start in '{spec}'")))?;
    let b: usize = b
        .trim()
        .parse()
        .map_err(|_| CliError::parse("--bands", format!("bad end in '{spec}'")))?;
    if a >= b {
        return Err(CliError::parse("--bands", format!("empty range '{spec}'")));
    }
    Ok(a..b)
}

/// `coords:p`, the span of the first `p` coordinate axes.
pub fn parse_subspace(spec: &str) -> CliResult<usize> {
    let p = spec
        .strip_prefix("coords:")
        .and_then(|p| p.trim().parse::<usize>().ok())
        .ok_or_else(|| {
            CliError::parse(
                "--subspace",
                format!("'{spec}' is not of the form coords:<p>"),
            )
        })?;
    Ok(p)
}

/// `key=value` model parameter.
pub fn parse_param(spec: &str) -> CliResult<(String, f64)> {
    let (k, v) = spec
        .split_once('=')
        .ok_or_else(|| CliError::parse("--param", format!("'{spec}' is not key=value")))?;
    let v: f64 = v
        .trim()
        .parse()
        .map_err(|_| CliError::parse("--param", format!("'{v}' is not a number")))?;
    Ok((k.trim().to_string(), v))
}
