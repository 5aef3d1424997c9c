//! Command-line interface. `run` returns the process exit code:
//! 0 success (or feasible input), 1 infeasible input, 2 usage or input-format
//! error, 3 internal failure.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::document::{parse_json, ConfigDoc, ParamsDoc, PathDocument};
use crate::error::Error;
use crate::path::{path_length, validate, Configuration, Params};
use crate::planner::{convergence_experiment, oracle_search, plan, PlanOptions};
use crate::rewrite::shorten;
use crate::smooth::{discretize, dubins_solve, Segment, SmoothPath};
use crate::typing::{analyze, Orientation};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INFEASIBLE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "ddgeo", version, about = "Discrete curvature-constrained paths")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct ParamArgs {
    /// Number of polygon sides; theta = 360/n degrees.
    #[arg(long = "params-n", global = true)]
    params_n: Option<u32>,
    /// Edge length scale (default 1, or the file's value).
    #[arg(long, global = true)]
    ell: Option<f64>,
}

#[derive(Args, Debug, Clone)]
struct InstanceArgs {
    /// JSON file with `start`, `end` and optionally `params`.
    instance: Option<PathBuf>,
    /// Start configuration `x,y,heading_degrees`.
    #[arg(long, allow_hyphen_values = true)]
    from: Option<String>,
    /// Goal configuration `x,y,heading_degrees`.
    #[arg(long, allow_hyphen_values = true)]
    to: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a path document for feasibility.
    Validate {
        file: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Report the arcs, bridges and type of a feasible path.
    Classify {
        file: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Shortest path between two configurations.
    Plan {
        #[command(flatten)]
        instance: InstanceArgs,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Per-candidate table as JSON.
        #[arg(long)]
        diagnostics: Option<PathBuf>,
        /// Also run the randomized search and report its length.
        #[arg(long)]
        oracle: bool,
        /// Seed for the randomized search.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Restarts of the randomized search.
        #[arg(long, default_value_t = 20)]
        budget: usize,
    },
    /// Apply length-reducing rewrites until none applies.
    Shorten {
        file: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = crate::rewrite::DEFAULT_BUDGET)]
        budget: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// θ-discretization of a smooth word such as `L:90,S:2.5,R:45`
    /// (arc sweeps in degrees, unit radius).
    Discretize {
        word: String,
        /// Polygon sides; ell is 2 sin(π/n).
        #[arg(long)]
        n: u32,
        /// Start configuration `x,y,heading_degrees`.
        #[arg(long, allow_hyphen_values = true, default_value = "0,0,0")]
        start: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Shortest unit-radius smooth path between two configurations.
    Dubins {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Planner, discretized smooth path and smooth path lengths for a list
    /// of polygon sizes with unit radius.
    Converge {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Comma-separated polygon sizes.
        #[arg(long, value_delimiter = ',', default_value = "8,16,32,64,128,360")]
        n: Vec<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a path document as SVG.
    Render {
        file: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Failure carrying its exit code.
struct Fail(i32, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Internal(_) | Error::PlannerFailure(_) => EXIT_INTERNAL,
            _ => EXIT_USAGE,
        };
        Fail(code, e.to_string())
    }
}

type CliResult = std::result::Result<i32, Fail>;

#[derive(Deserialize)]
struct InstanceDoc {
    #[serde(default)]
    params: Option<ParamsDoc>,
    start: ConfigDoc,
    end: ConfigDoc,
}

#[derive(Serialize)]
struct DubinsReport<'a> {
    word: String,
    length: f64,
    path: &'a SmoothPath,
}

fn read(path: &Path) -> std::result::Result<String, Fail> {
    std::fs::read_to_string(path).map_err(|e| Fail(EXIT_USAGE, format!("cannot read {}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, target: &Option<PathBuf>, text: &str) -> std::result::Result<(), Fail> {
    match target {
        Some(p) => std::fs::write(p, text).map_err(|e| Fail(EXIT_USAGE, format!("cannot write {}: {e}", p.display()))),
        None => writeln!(out, "{text}").map_err(|e| Fail(EXIT_INTERNAL, e.to_string())),
    }
}

fn write_file(target: &Option<PathBuf>, text: &str) -> std::result::Result<(), Fail> {
    if let Some(p) = target {
        std::fs::write(p, text).map_err(|e| Fail(EXIT_USAGE, format!("cannot write {}: {e}", p.display())))?;
    }
    Ok(())
}

fn parse_config(s: &str) -> std::result::Result<Configuration, Fail> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Fail(EXIT_USAGE, format!("bad configuration '{s}': {e}")))?;
    match parts[..] {
        [x, y, h] if x.is_finite() && y.is_finite() && h.is_finite() => Ok(Configuration::from_angle(x, y, h.to_radians())),
        _ => Err(Fail(EXIT_USAGE, format!("configuration must be x,y,heading_degrees, got '{s}'"))),
    }
}

fn resolve_params(args: &ParamArgs, file: Option<&ParamsDoc>) -> std::result::Result<Params, Fail> {
    let ell = args.ell.or(file.map(|p| p.ell)).unwrap_or(1.0);
    if let Some(n) = args.params_n {
        return Ok(Params::from_n_sides(n, ell)?);
    }
    match file {
        Some(p) => {
            let mut q = p.clone();
            q.ell = ell;
            Ok(q.to_params()?)
        }
        None => Err(Fail(EXIT_USAGE, "parameters missing: give --params-n".into())),
    }
}

fn load_instance(args: &InstanceArgs) -> std::result::Result<(Configuration, Configuration, Option<ParamsDoc>), Fail> {
    match (&args.instance, &args.from, &args.to) {
        (Some(f), None, None) => {
            let doc: InstanceDoc = parse_json(&read(f)?)?;
            Ok((doc.start.to_config()?, doc.end.to_config()?, doc.params))
        }
        (None, Some(a), Some(b)) => Ok((parse_config(a)?, parse_config(b)?, None)),
        _ => Err(Fail(EXIT_USAGE, "give an instance file or both --from and --to".into())),
    }
}

fn load_path(file: &Path, args: &ParamArgs) -> std::result::Result<(PathDocument, Params), Fail> {
    let doc = PathDocument::from_json(&read(file)?)?;
    let params = resolve_params(args, Some(&doc.params))?;
    Ok((doc, params))
}

fn parse_word(word: &str) -> std::result::Result<Vec<Segment>, Fail> {
    let bad = || Fail(EXIT_USAGE, format!("bad smooth word '{word}', expected e.g. L:90,S:2.5,R:45"));
    word.split(',')
        .map(|tok| {
            let (kind, val) = tok.trim().split_once(':').ok_or_else(bad)?;
            let x: f64 = val.trim().parse().map_err(|_| bad())?;
            if !(x > 0.0) || !x.is_finite() {
                return Err(bad());
            }
            match kind.trim() {
                "L" => Ok(Segment::Arc { orientation: Orientation::Left, sweep: x.to_radians() }),
                "R" => Ok(Segment::Arc { orientation: Orientation::Right, sweep: x.to_radians() }),
                "S" => Ok(Segment::Line { length: x }),
                _ => Err(bad()),
            }
        })
        .collect()
}

fn execute(cli: Cli, out: &mut dyn Write) -> CliResult {
    match cli.command {
        Command::Validate { file, params } => {
            let (doc, params) = load_path(&file, &params)?;
            let violations = validate(&doc.path()?, &params)?;
            if violations.is_empty() {
                emit(out, &None, "feasible")?;
                return Ok(EXIT_OK);
            }
            for v in &violations {
                emit(out, &None, &format!("{:?} at {}: magnitude {:.12}", v.kind, v.location, v.magnitude))?;
            }
            Ok(EXIT_INFEASIBLE)
        }
        Command::Classify { file, params, out: target, svg } => {
            let (mut doc, params) = load_path(&file, &params)?;
            let path = doc.path()?;
            if !validate(&path, &params)?.is_empty() {
                emit(out, &None, "infeasible")?;
                return Ok(EXIT_INFEASIBLE);
            }
            let structure = analyze(&path, &params)?;
            let type_word = structure.type_word.clone();
            doc.structure = Some(structure.into());
            write_file(&svg, &crate::svg::render(&path, &params))?;
            if target.is_some() {
                emit(out, &None, &format!("type {type_word}"))?;
            }
            emit(out, &target, &doc.to_json())?;
            Ok(EXIT_OK)
        }
        Command::Plan { instance, params, out: target, svg, diagnostics, oracle, seed, budget } => {
            let (u, v, file_params) = load_instance(&instance)?;
            let params = resolve_params(&params, file_params.as_ref())?;
            let result = plan(&u, &v, &params, &PlanOptions::default())?;
            log::info!(
                "plan: {} candidates, {} solved, length {}",
                result.counts.tried,
                result.counts.solved,
                result.length
            );
            let mut doc = PathDocument::from_path(&result.path, &params);
            doc.structure = Some(analyze(&result.path, &params)?.into());
            write_file(&svg, &crate::svg::render(&result.path, &params))?;
            if let Some(p) = &diagnostics {
                let text = serde_json::to_string_pretty(&serde_json::json!({
                    "counts": result.counts,
                    "candidates": result.diagnostics,
                }))
                .map_err(|e| Fail(EXIT_INTERNAL, e.to_string()))?;
                write_file(&Some(p.clone()), &text)?;
            }
            if target.is_some() {
                emit(out, &None, &format!("type {} length {:.12}", result.type_word, result.length))?;
            }
            if oracle {
                let n_max = (2.0 * result.length / params.ell).ceil() as usize + 3;
                let o = oracle_search(&u, &v, &params, n_max.max(result.path.vertices.len()), budget, seed)?;
                emit(out, &None, &format!("oracle length {:.12} ({} restarts)", o.length, o.restarts))?;
            }
            emit(out, &target, &doc.to_json())?;
            Ok(EXIT_OK)
        }
        Command::Shorten { file, params, budget, out: target, svg } => {
            let (doc, params) = load_path(&file, &params)?;
            let path = doc.path()?;
            if !validate(&path, &params)?.is_empty() {
                emit(out, &None, "infeasible")?;
                return Ok(EXIT_INFEASIBLE);
            }
            let result = shorten(&path, &params, budget)?;
            let mut next = PathDocument::from_path(&result.path, &params);
            next.structure = Some(analyze(&result.path, &params)?.into());
            next.trace = Some(result.trace);
            write_file(&svg, &crate::svg::render(&result.path, &params))?;
            if target.is_some() {
                emit(out, &None, &format!("{:?}, length {:.12}", result.status, path_length(&result.path)))?;
            }
            emit(out, &target, &next.to_json())?;
            Ok(EXIT_OK)
        }
        Command::Discretize { word, n, start, out: target, svg } => {
            let gamma = SmoothPath::new(parse_config(&start)?, parse_word(&word)?)?;
            let params = Params::unit_schedule(n)?;
            let path = discretize(&gamma, params.theta)?;
            write_file(&svg, &crate::svg::render(&path, &params))?;
            emit(out, &target, &PathDocument::from_path(&path, &params).to_json())?;
            Ok(EXIT_OK)
        }
        Command::Dubins { instance, out: target } => {
            let (u, v, _) = load_instance(&instance)?;
            let g = dubins_solve(&u, &v)?;
            let report = DubinsReport { word: g.word(), length: g.length(), path: &g };
            let text = serde_json::to_string_pretty(&report).map_err(|e| Fail(EXIT_INTERNAL, e.to_string()))?;
            emit(out, &target, &text)?;
            Ok(EXIT_OK)
        }
        Command::Converge { instance, n, out: target } => {
            let (u, v, _) = load_instance(&instance)?;
            if n.is_empty() {
                return Err(Fail(EXIT_USAGE, "--n needs at least one value".into()));
            }
            let rows = convergence_experiment(&u, &v, &n)?;
            let mut table = format!("{:>6} {:>16} {:>16} {:>16} {:>10} sandwich\n", "n", "plan", "discretized", "dubins", "gap");
            let mut all = true;
            for r in &rows {
                let ok = r.plan <= r.discretized + 1e-9 && r.discretized <= r.dubins + 1e-9;
                all &= ok;
                table.push_str(&format!(
                    "{:>6} {:>16.12} {:>16.12} {:>16.12} {:>10.3e} {}\n",
                    r.n_sides,
                    r.plan,
                    r.discretized,
                    r.dubins,
                    r.relative_gap(),
                    if ok { "ok" } else { "VIOLATED" }
                ));
            }
            emit(out, &None, table.trim_end())?;
            if let Some(p) = &target {
                let text = serde_json::to_string_pretty(&rows).map_err(|e| Fail(EXIT_INTERNAL, e.to_string()))?;
                write_file(&Some(p.clone()), &text)?;
            }
            Ok(if all { EXIT_OK } else { EXIT_INTERNAL })
        }
        Command::Render { file, params, svg, out: target } => {
            let (doc, params) = load_path(&file, &params)?;
            let text = crate::svg::render(&doc.path()?, &params);
            emit(out, &svg.or(target), &text)?;
            Ok(EXIT_OK)
        }
    }
}

fn init_logging() {
    let env = env_logger::Env::new().filter_or("DDGEO_LOG", "warn");
    let _ = env_logger::Builder::from_env(env).format_timestamp(None).try_init();
}

/// Runs the command line `args` (program name first), writing results to
/// `out` and messages to `err`.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    init_logging();
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = write!(err, "{e}");
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(Fail(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_with(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
