//! Command-line front end for the eigenloop degeneracy tests.
//!
//! [`execute`] runs one invocation against arbitrary writers and returns the
//! process exit code, so the binary and the tests share one code path.

pub mod config;
pub mod error;
pub mod format;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use eigenloop::homotopy::{
    classify_loop, normalize_base_point, winding_number, FrameLoop, LiftedCurve, Parity,
};
use eigenloop::models::{jt_frame_loop, random_so2_loop, random_so_loop, ModelName, ModelSpec};
use eigenloop::oracles::{quaternion_lift, spin_lift_sign, MAX_ROTOR_DIM};
use eigenloop::report::TestReport;
use eigenloop::skewlin::{skew_canonical_form, SpecialOrthogonalMatrix};
use eigenloop::stone::{stone_report, stone_test, SurfaceSweep};
use eigenloop::subspace::{subspace_degeneracy_test, ReferenceSubspace};
use eigenloop::transport::{loop_report_with_lift, run_path_detailed, HamiltonianPath};
use eigenloop::{Config, Exec};
use nalgebra::DMatrix;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{
    apply_tolerances, extract_tolerances, parse_loop, parse_param, parse_range, parse_sphere,
    parse_subspace, RunConfig,
};
use crate::error::{CliError, CliResult};
use crate::format::{
    frame_loop_from_file, frame_loop_to_file, read_matrix_file, read_points, write_string,
};

pub const TOOL_NAME: &str = "eigenloop";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

const TOLERANCE_HELP: &str = "\
Tolerances:
  --tol-<name> <value>   override one tolerance; <name> is a key printed by
                         --show-config, with the leading 'tol_' optional and
                         '-' for '_' (e.g. --tol-gap 1e-6, --tol-delta-step 0.3)

Exit codes: 0 verdict produced; 2 usage; 3 parse; 4 config; 5 io;
10-32 library errors (see README).";

#[derive(Debug, Parser)]
#[command(name = "eigenloop", version, about = "Degeneracy certificates from loops of real eigenframes", after_help = TOLERANCE_HELP)]
pub struct Cli {
    /// JSON run configuration; command-line flags take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Print the effective tolerances as JSON and exit.
    #[arg(long, global = true)]
    pub show_config: bool,
    /// Also write the JSON result to this file.
    #[arg(long, global = true, value_name = "FILE")]
    pub output: Option<PathBuf>,
    /// Run without the thread pool.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Homotopy class of a frame loop read from a file.
    ClassifyLoop(ClassifyArgs),
    /// Transport eigenvectors of a Hamiltonian family around a loop.
    ScanHamiltonian(ScanArgs),
    /// Berry-phase winding over a closed surface.
    StoneTest(StoneArgs),
    /// Double-cover oracles on a frame loop.
    Oracle(OracleArgs),
    /// Write a built-in frame loop in the frame-loop file format.
    ExportLoop(ExportArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::ClassifyLoop(_) => "classify-loop",
            Command::ScanHamiltonian(_) => "scan-hamiltonian",
            Command::StoneTest(_) => "stone-test",
            Command::Oracle(_) => "oracle",
            Command::ExportLoop(_) => "export-loop",
        }
    }
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    /// Frame-loop file (JSON or whitespace text).
    pub input: Option<PathBuf>,
    /// Per-sample CSV: parameter and lifted angles.
    #[arg(long, value_name = "FILE")]
    pub diag: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// Built-in model name.
    #[arg(long)]
    pub model: Option<String>,
    /// Model parameter, repeatable.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    pub params: Vec<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Matrix-stream file of Hamiltonian samples around a closed loop,
    /// instead of a model.
    #[arg(long, value_name = "FILE", conflicts_with = "model")]
    pub input: Option<PathBuf>,
    /// circle:cx,cy,r | ellipse:cx,cy,a,b,tilt | polyline:FILE
    #[arg(long = "loop", value_name = "SPEC")]
    pub loop_spec: Option<String>,
    /// Grid points on the loop including both ends.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Project onto a reference subspace, coords:p.
    #[arg(long, value_name = "SPEC")]
    pub subspace: Option<String>,
    /// Bands for the subspace test, a..b (default 0..p).
    #[arg(long, value_name = "A..B")]
    pub bands: Option<String>,
    /// JSON array of interior parameter points for spot checks.
    #[arg(long, value_name = "FILE")]
    pub interior: Option<PathBuf>,
    /// Per-sample CSV: parameter, eigenvalues, gap and lifted angles.
    #[arg(long, value_name = "FILE")]
    pub diag: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StoneArgs {
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long = "param", value_name = "KEY=VALUE")]
    pub params: Vec<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Sphere cx,cy,cz,r swept by latitude circles.
    #[arg(long, value_name = "CX,CY,CZ,R")]
    pub sphere: Option<String>,
    #[arg(long, default_value_t = 50)]
    pub n_sweep: usize,
    #[arg(long, default_value_t = 100)]
    pub n_loop: usize,
    /// JSON array of loops (arrays of points) sweeping the surface.
    #[arg(long, value_name = "FILE", conflicts_with = "sphere")]
    pub loops: Option<PathBuf>,
    /// Band index, 0 = lowest.
    #[arg(long)]
    pub band: Option<usize>,
    /// Traverse every loop backwards.
    #[arg(long)]
    pub reverse: bool,
    /// Per-loop CSV of unwrapped phases.
    #[arg(long, value_name = "FILE")]
    pub diag: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    pub input: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LoopKind {
    /// The SO(3) eigenframe loop of the T⊗τ₂ model around the origin.
    Jt,
    /// Random smooth SO(n) loop of a chosen class.
    Random,
    /// SO(2) loop with a chosen winding.
    So2,
    /// Constant loop at the identity.
    Constant,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ClassArg {
    Trivial,
    Nontrivial,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[arg(value_enum)]
    pub kind: LoopKind,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = ClassArg::Nontrivial)]
    pub class: ClassArg,
    #[arg(long, default_value_t = 1)]
    pub turns: i64,
    /// Write the whitespace text format instead of JSON.
    #[arg(long)]
    pub text: bool,
}

/// Recursively rebuilds every object with sorted keys.
pub fn canonical(v: Value) -> Value {
    match v {
        Value::Object(map) => {
            let sorted: BTreeMap<String, Value> =
                map.into_iter().map(|(k, v)| (k, canonical(v))).collect();
            Value::Object(sorted.into_iter().collect())
        }
        Value::Array(xs) => Value::Array(xs.into_iter().map(canonical).collect()),
        other => other,
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

struct Context {
    cfg: Config,
    run: RunConfig,
    output: Option<PathBuf>,
}

fn envelope(command: &str, ctx: &Context, report: Value, details: Value) -> Value {
    canonical(json!({
        "tool": {"name": TOOL_NAME, "version": VERSION},
        "command": command,
        "config": to_value(&ctx.cfg),
        "report": report,
        "details": details,
    }))
}

fn model_spec(
    name: Option<&str>,
    params: &[String],
    seed: Option<u64>,
    from_config: Option<&ModelSpec>,
) -> CliResult<Option<ModelSpec>> {
    let mut spec = match (name, from_config) {
        (Some(n), _) => ModelSpec::new(n.parse::<ModelName>()?),
        (None, Some(s)) => s.clone(),
        (None, None) => return Ok(None),
    };
    for p in params {
        let (k, v) = parse_param(p)?;
        spec.params.insert(k, v);
    }
    if let Some(s) = seed {
        spec.seed = s;
    }
    Ok(Some(spec))
}

fn require<T>(x: Option<T>, what: &str) -> CliResult<T> {
    x.ok_or_else(|| CliError::Usage(format!("missing {what}")))
}

fn lift_angles(lift: &LiftedCurve) -> CliResult<Vec<(f64, Vec<f64>)>> {
    lift.params
        .iter()
        .zip(&lift.points)
        .map(|(t, x)| Ok((*t, skew_canonical_form(x)?.angles)))
        .collect()
}

fn csv_line(cells: impl IntoIterator<Item = String>) -> String {
    let mut s = cells.into_iter().collect::<Vec<_>>().join(",");
    s.push('\n');
    s
}

fn loop_from_input(ctx: &Context, input: Option<PathBuf>) -> CliResult<(FrameLoop, bool)> {
    let path = require(input.or_else(|| ctx.run.input.clone()), "input file")?;
    let l = frame_loop_from_file(&read_matrix_file(&path)?, &ctx.cfg)?;
    let moved =
        l.samples()[0].distance(&SpecialOrthogonalMatrix::identity(l.dim())) > ctx.cfg.tol_closure;
    Ok((if moved { normalize_base_point(&l) } else { l }, moved))
}

fn classify_cmd(ctx: &Context, a: ClassifyArgs) -> CliResult<Value> {
    let (l, moved) = loop_from_input(ctx, a.input)?;
    let (mut report, lift) = loop_report_with_lift(&l, &ctx.cfg)?;
    report.diagnostics.samples = Some(l.len());
    let mut details = json!({
        "n": l.dim(),
        "samples": l.len(),
        "base_point_normalized": moved,
    });
    if let Some(lift) = &lift {
        let form = skew_canonical_form(lift.endpoint())?;
        details["lift_endpoint"] = json!(rows(&lift.endpoint().to_matrix()));
        details["endpoint_angles"] = json!(form.angles);
        details["lift_segments"] = json!(lift.segment_ends.len());
    }
    if let Some(path) = a.diag.or_else(|| ctx.run.diag.clone()) {
        let mut csv = String::new();
        match &lift {
            Some(lift) => {
                let m = l.dim() / 2;
                csv += &csv_line(
                    std::iter::once("t".to_string()).chain((0..m).map(|i| format!("angle_{i}"))),
                );
                for (t, angles) in lift_angles(lift)? {
                    csv += &csv_line(
                        std::iter::once(format!("{t}"))
                            .chain(angles.iter().map(|a| format!("{a}"))),
                    );
                }
            }
            None => {
                csv += "t,angle\n";
                for (t, s) in l.params().iter().zip(l.samples()) {
                    let m = s.as_matrix();
                    let angle = if m.nrows() == 2 {
                        m[(1, 0)].atan2(m[(0, 0)])
                    } else {
                        0.0
                    };
                    csv += &format!("{t},{angle}\n");
                }
            }
        }
        write_string(&path, &csv)?;
    }
    Ok(envelope("classify-loop", ctx, to_value(&report), details))
}

fn scan_cmd(ctx: &Context, a: ScanArgs) -> CliResult<Value> {
    let run = &ctx.run;
    let spec = model_spec(
        a.model.as_deref(),
        &a.params,
        a.seed.or(run.seed),
        run.model.as_ref(),
    )?;
    let input = a.input.or_else(|| run.input.clone());
    let samples = a.samples.or(run.samples).unwrap_or(64);
    let subspace = a.subspace.or_else(|| run.subspace.clone());
    let mut details = json!({});

    let (report, diag_rows): (TestReport, Option<String>) = if let Some(sub) = subspace {
        let spec = require(spec, "--model for a subspace run")?;
        let h = spec.build()?;
        let loop_spec = require(a.loop_spec.or_else(|| run.loop_spec.clone()), "--loop")?;
        let l = parse_loop(&loop_spec, samples)?;
        let p = parse_subspace(&sub)?;
        let reference = ReferenceSubspace::coordinates(h.dim(), p)?;
        let bands = match a.bands.or_else(|| run.bands.clone()) {
            Some(b) => parse_range(&b)?,
            None => 0..p,
        };
        let interior = match a.interior.or_else(|| run.interior.clone()) {
            Some(path) => read_points(&path)?,
            None => Vec::new(),
        };
        let (report, diag) =
            subspace_degeneracy_test(&h, &l, &reference, bands.clone(), &interior, &ctx.cfg)?;
        details["model"] = to_value(&spec);
        details["loop"] = json!(loop_spec);
        details["subspace"] = json!({
            "p": p,
            "bands": [bands.start, bands.end],
            "overlap_bound": diag.bound,
            "min_overlap": diag.min_overlap,
            "margin": diag.margin,
            "min_sigma": diag.min_sigma,
            "interior_points": interior.len(),
        });
        (report, None)
    } else {
        let path = if let Some(input) = &input {
            let file = read_matrix_file(input)?;
            details["input"] = json!(input.display().to_string());
            let mut p = HamiltonianPath::from_table(file.to_matrices())?;
            if let Some(params) = file.params {
                p.params = params;
            }
            p
        } else {
            let spec = require(spec, "--model or --input")?;
            let h = spec.build()?;
            let loop_spec = require(a.loop_spec.or_else(|| run.loop_spec.clone()), "--loop")?;
            let l = parse_loop(&loop_spec, samples)?;
            details["model"] = to_value(&spec);
            details["loop"] = json!(loop_spec);
            HamiltonianPath::from_sampler(&h, &l, &ctx.cfg)?
        };
        let result = run_path_detailed(&path, &ctx.cfg)?;
        let tr = &result.transport;
        let n = tr.dim();
        let lifted: BTreeMap<u64, Vec<f64>> = match &result.lift {
            Some(lift) => lift_angles(lift)?
                .into_iter()
                .map(|(t, a)| (t.to_bits(), a))
                .collect(),
            None => BTreeMap::new(),
        };
        let m = if result.lift.is_some() { n / 2 } else { 0 };
        let mut csv = csv_line(
            std::iter::once("t".to_string())
                .chain((0..n).map(|i| format!("e{i}")))
                .chain(std::iter::once("min_gap".to_string()))
                .chain((0..m).map(|i| format!("angle_{i}"))),
        );
        for (k, t) in tr.params.iter().enumerate() {
            let ev = &tr.eigenvalues[k];
            let gap = ev
                .as_slice()
                .windows(2)
                .map(|w| w[1] - w[0])
                .fold(f64::INFINITY, f64::min);
            let angles = lifted.get(&t.to_bits());
            csv += &csv_line(
                std::iter::once(format!("{t}"))
                    .chain(ev.iter().map(|e| format!("{e}")))
                    .chain(std::iter::once(if n > 1 {
                        format!("{gap}")
                    } else {
                        String::new()
                    }))
                    .chain((0..m).map(|i| angles.map(|a| format!("{}", a[i])).unwrap_or_default())),
            );
        }
        (result.report, Some(csv))
    };
    if let Some(path) = a.diag.or_else(|| run.diag.clone()) {
        let csv = diag_rows
            .ok_or_else(|| CliError::Usage("--diag is not available for subspace runs".into()))?;
        write_string(&path, &csv)?;
    }
    Ok(envelope(
        "scan-hamiltonian",
        ctx,
        to_value(&report),
        details,
    ))
}

fn stone_cmd(ctx: &Context, a: StoneArgs) -> CliResult<Value> {
    let run = &ctx.run;
    let spec = model_spec(
        a.model.as_deref(),
        &a.params,
        a.seed.or(run.seed),
        run.model.as_ref(),
    )?
    .unwrap_or_else(|| ModelSpec::new(ModelName::SpinHalfMonopole));
    let h = spec.build_hermitian()?;
    let mut sweep = if let Some(s) = a.sphere {
        parse_sphere(&s, a.n_sweep, a.n_loop)?
    } else if let Some(path) = a.loops {
        let name = path.display().to_string();
        let loops: Vec<Vec<Vec<f64>>> = serde_json::from_str(&format::read_to_string(&path)?)
            .map_err(|e| CliError::parse(&name, e.to_string()))?;
        SurfaceSweep::Loops(loops)
    } else if let Some(s) = &run.sweep {
        s.clone()
    } else {
        return Err(CliError::Usage("missing --sphere or --loops".into()));
    };
    if a.reverse || run.reverse.unwrap_or(false) {
        sweep = sweep.reversed_orientation();
    }
    let band = a.band.or(run.band).unwrap_or(0);
    let result = stone_test(&h, &sweep, band, &ctx.cfg)?;
    let report = stone_report(&result);
    if let Some(path) = a.diag.or_else(|| run.diag.clone()) {
        let mut csv = String::from("loop,gamma\n");
        for (i, g) in result.gammas.iter().enumerate() {
            csv += &format!("{i},{g}\n");
        }
        write_string(&path, &csv)?;
    }
    let details = json!({
        "model": to_value(&spec),
        "band": band,
        "loops": result.loops,
        "samples_per_loop": result.samples_per_loop,
        "gammas": result.gammas,
    });
    Ok(envelope("stone-test", ctx, to_value(&report), details))
}

fn parity_str(p: Parity) -> &'static str {
    match p {
        Parity::Trivial => "trivial",
        Parity::Nontrivial => "nontrivial",
    }
}

fn oracle_cmd(ctx: &Context, a: OracleArgs) -> CliResult<Value> {
    let (l, _) = loop_from_input(ctx, a.input)?;
    let n = l.dim();
    let mut out = json!({"n": n, "samples": l.len()});
    match n {
        2 => {
            out["winding"] = json!(winding_number(&l, &ctx.cfg)?);
        }
        3..=MAX_ROTOR_DIM => {
            let spin = spin_lift_sign(&l, &ctx.cfg)?;
            out["spin_sign"] = json!(spin);
            out["parity"] = json!(parity_str(Parity::from_sign(spin)));
            if n == 3 {
                out["quaternion_sign"] = json!(quaternion_lift(&l, &ctx.cfg)?);
            }
            let (_, v) = classify_loop(&l, &ctx.cfg)?;
            out["classifier_agrees"] = json!(v.parity == Parity::from_sign(spin));
        }
        _ => {
            return Err(eigenloop::Error::WrongDimension(format!(
                "oracles cover n = 2 and 3 ≤ n ≤ {MAX_ROTOR_DIM}, got n = {n}"
            ))
            .into())
        }
    }
    Ok(envelope("oracle", ctx, out, json!({})))
}

fn export_cmd(ctx: &Context, a: ExportArgs) -> CliResult<String> {
    let cfg = &ctx.cfg;
    let l = match a.kind {
        LoopKind::Jt => jt_frame_loop(a.samples, cfg)?,
        LoopKind::Random => {
            let target = match a.class {
                ClassArg::Trivial => Parity::Trivial,
                ClassArg::Nontrivial => Parity::Nontrivial,
            };
            random_so_loop(a.n, a.seed, target, cfg)?
        }
        LoopKind::So2 => random_so2_loop(a.turns, a.seed, cfg)?,
        LoopKind::Constant => {
            let n = a.n;
            FrameLoop::from_fn(
                a.samples,
                move |_| Ok(SpecialOrthogonalMatrix::identity(n)),
                cfg,
            )?
        }
    };
    let file = frame_loop_to_file(&l);
    Ok(if a.text {
        file.to_text()
    } else {
        let mut s = serde_json::to_string(&file).expect("matrix files serialize");
        s.push('\n');
        s
    })
}

fn dispatch(args: Vec<OsString>, out: &mut dyn Write) -> CliResult<()> {
    let (args, overrides) = extract_tolerances(args)?;
    let cli = Cli::try_parse_from(args).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
            CliError::Usage(format!("\u{0}{e}"))
        }
        _ => CliError::Usage(e.to_string()),
    })?;
    let run = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let mut cfg = run.tolerances.clone().unwrap_or_default();
    apply_tolerances(&mut cfg, &overrides)?;
    if cli.sequential {
        cfg.exec = Exec::Sequential;
    }
    let output = cli.output.clone().or_else(|| run.output.clone());
    let ctx = Context { cfg, run, output };
    if cli.show_config {
        let text = serde_json::to_string_pretty(&canonical(to_value(&ctx.cfg)))
            .expect("config serializes");
        writeln!(out, "{text}").map_err(|e| io_err("<stdout>", e))?;
        return Ok(());
    }
    let command = require(cli.command, "subcommand (try --help)")?;
    if let Some(want) = &ctx.run.subcommand {
        if want != command.name() {
            return Err(CliError::Config(format!(
                "config file is for '{want}', not '{}'",
                command.name()
            )));
        }
    }
    let value = match command {
        Command::ClassifyLoop(a) => classify_cmd(&ctx, a)?,
        Command::ScanHamiltonian(a) => scan_cmd(&ctx, a)?,
        Command::StoneTest(a) => stone_cmd(&ctx, a)?,
        Command::Oracle(a) => oracle_cmd(&ctx, a)?,
        Command::ExportLoop(a) => {
            let text = export_cmd(&ctx, a)?;
            if let Some(path) = &ctx.output {
                write_string(path, &text)?;
            }
            out.write_all(text.as_bytes())
                .map_err(|e| io_err("<stdout>", e))?;
            return Ok(());
        }
    };
    let mut text = serde_json::to_string(&value).expect("values serialize");
    text.push('\n');
    if let Some(path) = &ctx.output {
        write_string(path, &text)?;
    }
    out.write_all(text.as_bytes())
        .map_err(|e| io_err("<stdout>", e))
}

fn io_err(name: &str, source: std::io::Error) -> CliError {
    CliError::Io {
        path: Path::new(name).to_path_buf(),
        source,
    }
}

/// Runs one invocation. Results and error objects go to `out`, a short
/// human-readable message to `err`. Returns the exit code.
pub fn execute(args: Vec<OsString>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match dispatch(args, out) {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) if msg.starts_with('\u{0}') => {
            // --help and --version are not errors.
            let _ = write!(out, "{}", &msg[1..]);
            0
        }
        Err(e) => {
            let _ = writeln!(out, "{}", canonical(e.to_json()));
            let _ = writeln!(err, "eigenloop: {} ({}): {e}", e.code(), e.stage());
            e.exit_code()
        }
    }
}
