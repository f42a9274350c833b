//! Command-line front end: argument parsing, dispatch and output formats.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::Value;

use orbifloer_core::lattice::{
    integral_basis_in_cone_traced, parse_rational, IntMatrix, LatticeVector, RationalVector, SimplicialCone,
};
use orbifloer_core::ltsolver::{build_lts, solve, stratify, SolveOptions};
use orbifloer_core::potential::{bulk_leading_potential, wp_central_critical, wp_lambda_closed_form};
use orbifloer_core::region::{nondisplaceable_region, query_point};
use orbifloer_core::report::{
    BoxReport, ConeBasisReport, CriticalReport, DiscsReport, LteReport, MembershipReport, PotentialReport,
    RegionReport, WpCriticalReport,
};
use orbifloer_core::{BulkParam, Error, FiberRegion, RegionOptions, StackyModel};

pub mod plot;
pub mod reproduce;

#[derive(Debug, Parser)]
#[command(name = "orbifloer", version, about = "Lagrangian torus fibers of compact toric orbifolds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Twisted sectors (Box′) of the model.
    Box(ModelArgs),
    /// Basic smooth discs and orbi-discs with their indices and areas.
    Discs {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, allow_hyphen_values = true)]
        u: Option<String>,
    },
    /// Leading-order (bulk-deformed) potential at a fiber.
    Potential(FiberArgs),
    /// Critical points of the leading potential.
    Critical {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, allow_hyphen_values = true)]
        u: Option<String>,
        #[arg(long)]
        bulk: Option<PathBuf>,
        #[arg(long, default_value_t = 0.5)]
        t_value: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Leading term equations and their solvability verdict.
    Lte {
        #[command(flatten)]
        fiber: FiberArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Union of certified non-displaceable fiber regions.
    Region(RegionArgs),
    /// Unimodular basis inside a simplicial cone.
    Conebasis {
        /// Generators as rows, e.g. "1,0;1,2".
        #[arg(long)]
        cone: String,
    },
    /// Runs a named worked example and compares it with the stored output.
    Reproduce {
        /// One of the example names, or "all".
        name: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Print the output without comparing.
        #[arg(long, hide = true)]
        print_only: bool,
    },
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// teardrop:a, wp:1,a1,..., square[:c1,c2,c3,c4], interval:c1,c2
    #[arg(long, conflicts_with = "model", required_unless_present = "model")]
    pub preset: Option<String>,
    /// Model JSON file.
    #[arg(long)]
    pub model: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FiberArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Fiber position "p/q,p/q,...".
    #[arg(long, allow_hyphen_values = true)]
    pub u: String,
    /// Bulk parameters JSON file.
    #[arg(long)]
    pub bulk: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RegionArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 2)]
    pub max_levels: usize,
    /// Add limit points of pieces that lie in the interior of the polytope.
    #[arg(long)]
    pub closure: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Points to test for membership (repeatable).
    #[arg(long, allow_hyphen_values = true)]
    pub query: Vec<String>,
    /// Write an SVG picture (two-dimensional models only).
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Print a CSV membership grid with this many samples per axis instead of JSON.
    #[arg(long)]
    pub grid: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Validation,
    Mismatch,
    Internal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
    /// Extra machine-readable detail.
    pub detail: Option<Value>,
}

impl CliError {
    pub fn validation(message: impl Into<String>) -> Self {
        CliError { kind: ErrorKind::Validation, message: message.into(), detail: None }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        CliError { kind: ErrorKind::Internal, message: message.into(), detail: None }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Validation => 2,
            ErrorKind::Mismatch => 3,
            ErrorKind::Internal => 1,
        }
    }

    pub fn to_json(&self) -> String {
        let kind = match self.kind {
            ErrorKind::Validation => "validation",
            ErrorKind::Mismatch => "mismatch",
            ErrorKind::Internal => "internal",
        };
        let mut v = serde_json::json!({ "error": { "kind": kind, "message": self.message } });
        if let Some(d) = &self.detail {
            v["error"]["detail"] = d.clone();
        }
        v.to_string()
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let kind = match e {
            Error::NoConvergence(_)
            | Error::NotUnimodular
            | Error::ZeroCoordinate(_)
            | Error::UnboundSymbol(_)
            | Error::FlagNotIncreasing(_)
            | Error::SpanNeverFull => ErrorKind::Internal,
            _ => ErrorKind::Validation,
        };
        CliError { kind, message: e.to_string(), detail: None }
    }
}

/// What a successful command prints on stdout.
#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    Json(Value),
    Text(String),
}

impl Output {
    pub fn render(&self) -> String {
        match self {
            Output::Json(v) => serde_json::to_string_pretty(v).expect("JSON values serialize"),
            Output::Text(s) => s.clone(),
        }
    }
}

fn json<T: Serialize>(x: &T) -> Result<Output, CliError> {
    serde_json::to_value(x).map(Output::Json).map_err(|e| CliError::internal(e.to_string()))
}

fn read_file(p: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(p).map_err(|e| CliError::validation(format!("cannot read {}: {e}", p.display())))
}

pub fn load_model(a: &ModelArgs) -> Result<StackyModel, CliError> {
    match (&a.preset, &a.model) {
        (Some(p), None) => Ok(StackyModel::preset(p)?),
        (None, Some(f)) => Ok(StackyModel::from_json(&read_file(f)?)?),
        _ => Err(CliError::validation("give exactly one of --preset and --model")),
    }
}

/// Parses "p/q,p/q,..." into a point of the model's dimension.
pub fn parse_point(text: &str, dim: usize) -> Result<RationalVector, CliError> {
    let coords = text.split(',').map(parse_rational).collect::<Result<Vec<_>, _>>()?;
    if coords.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: coords.len() }.into());
    }
    Ok(RationalVector(coords))
}

fn load_bulk(m: &StackyModel, path: &Option<PathBuf>) -> Result<BulkParam, CliError> {
    match path {
        Some(p) => Ok(BulkParam::from_json(m, &read_file(p)?)?),
        None => Ok(BulkParam::none()),
    }
}

/// Parses "1,0;1,2" into cone generators.
pub fn parse_cone(text: &str) -> Result<Vec<LatticeVector>, CliError> {
    text.split(';')
        .map(|row| {
            row.split(',')
                .map(|x| x.trim().parse::<BigInt>().map_err(|_| CliError::validation(format!("bad integer {x:?}"))))
                .collect::<Result<Vec<_>, _>>()
                .map(LatticeVector)
        })
        .collect()
}

/// Weights of a `wp:` preset, if that is the model source.
fn wp_weights(a: &ModelArgs) -> Option<Vec<u64>> {
    let p = a.preset.as_deref()?;
    let (name, args) = p.split_once(':')?;
    if name != "wp" && name != "weighted_projective" {
        return None;
    }
    args.split(',').map(|s| s.trim().parse().ok()).collect()
}

pub fn run(cli: Cli) -> Result<Output, CliError> {
    match cli.command {
        Command::Box(a) => json(&BoxReport::new(&load_model(&a)?)),
        Command::Discs { model, u } => {
            let m = load_model(&model)?;
            let u = u.map(|s| parse_point(&s, m.dim())).transpose()?;
            if let Some(u) = &u {
                m.check_interior(u)?;
            }
            json(&DiscsReport::new(&m, u.as_ref()))
        }
        Command::Potential(f) => {
            let m = load_model(&f.model)?;
            let u = parse_point(&f.u, m.dim())?;
            let bp = load_bulk(&m, &f.bulk)?;
            json(&PotentialReport::new(&bulk_leading_potential(&m, &u, &bp)?))
        }
        Command::Critical { model, u, bulk, t_value, seed } => {
            let m = load_model(&model)?;
            let Some(u) = u else {
                let Some(w) = wp_weights(&model) else {
                    return Err(CliError::validation("--u is required unless the model is a wp: preset"));
                };
                let c = wp_central_critical(&w)?;
                return json(&WpCriticalReport::new(&c, wp_lambda_closed_form(&w)));
            };
            let u = parse_point(&u, m.dim())?;
            let bp = load_bulk(&m, &bulk)?;
            let pot = bulk_leading_potential(&m, &u, &bp)?;
            let lts = build_lts(&stratify(&m, &u, &bp)?)?;
            let v = solve(&lts, &SolveOptions::for_model(&m, seed));
            json(&CriticalReport::new(&pot, &lts, &v, t_value)?)
        }
        Command::Lte { fiber, seed } => {
            let m = load_model(&fiber.model)?;
            let u = parse_point(&fiber.u, m.dim())?;
            let bp = load_bulk(&m, &fiber.bulk)?;
            let strat = stratify(&m, &u, &bp)?;
            let lts = build_lts(&strat)?;
            let v = solve(&lts, &SolveOptions::for_model(&m, seed));
            json(&LteReport::new(&strat, &lts, &v))
        }
        Command::Region(a) => region(a),
        Command::Conebasis { cone } => {
            let gens = parse_cone(&cone)?;
            let c = SimplicialCone::new(gens.clone())?;
            let sub = integral_basis_in_cone_traced(&c);
            let unimodular = IntMatrix::from_row_vectors(&sub.basis).is_unimodular();
            json(&ConeBasisReport::new(&gens, &sub, unimodular))
        }
        Command::Reproduce { name, seed, jobs, print_only } => reproduce::run(&name, seed, jobs, print_only),
    }
}

#[derive(Serialize)]
struct RegionOutput {
    #[serde(flatten)]
    region: RegionReport,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    queries: Vec<MembershipReport>,
}

fn region(a: RegionArgs) -> Result<Output, CliError> {
    let m = load_model(&a.model)?;
    if a.max_levels == 0 {
        return Err(CliError::validation("--max-levels must be at least 1"));
    }
    let points = a.query.iter().map(|q| parse_point(q, m.dim())).collect::<Result<Vec<_>, _>>()?;
    if a.svg.is_some() && m.dim() != 2 {
        return Err(CliError::validation("--svg needs a two-dimensional model"));
    }
    let opts = RegionOptions { max_levels: a.max_levels, closure: a.closure, seed: a.seed, jobs: a.jobs.max(1) };
    let r = nondisplaceable_region(&m, &opts)?;
    let queries = points.iter().map(|u| membership(&m, &r, u)).collect::<Result<Vec<_>, _>>()?;
    if let Some(path) = &a.svg {
        std::fs::write(path, plot::svg(&m, &r))
            .map_err(|e| CliError::internal(format!("cannot write {}: {e}", path.display())))?;
    }
    if let Some(n) = a.grid {
        if n == 0 {
            return Err(CliError::validation("--grid must be positive"));
        }
        return Ok(Output::Text(plot::grid_csv(&m, &r, n)?));
    }
    json(&RegionOutput { region: RegionReport::new(&m, &r), queries })
}

/// A point outside the open polytope is reported as a non-member.
pub fn membership(m: &StackyModel, r: &FiberRegion, u: &RationalVector) -> Result<MembershipReport, CliError> {
    match query_point(m, r, u) {
        Ok(q) => Ok(MembershipReport::new(r, &q)),
        Err(Error::PointNotInterior(_)) => {
            Ok(MembershipReport { u: orbifloer_core::report::rats(&u.0), member: false, pieces: Vec::new() })
        }
        Err(e) => Err(e.into()),
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning `(exit code, stdout, stderr)`.
pub fn run_args<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind as K;
            return match e.kind() {
                K::DisplayHelp | K::DisplayVersion | K::DisplayHelpOnMissingArgumentOrSubcommand => {
                    (0, e.to_string(), String::new())
                }
                _ => (2, String::new(), CliError::validation(e.to_string().trim_end()).to_json()),
            };
        }
    };
    match run(cli) {
        Ok(out) => (0, out.render(), String::new()),
        Err(e) => (e.exit_code(), String::new(), e.to_json()),
    }
}
