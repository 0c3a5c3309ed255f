//! Command-line harness for the readout-rigidity toolkit.
//!
//! Five subcommands cover the full pipeline: `check` runs the three
//! admissibility hypotheses plus the Born-deviation measurement for a
//! readout; `rigidity` adds the vertex-distance contraction chain and
//! issues a confirmed/violated/inconclusive verdict; `simplex-rigidity`
//! does the same for bare simplex self-maps; `scan-f` runs the
//! functional-equation scans on escort generators; `geodesic-dump` writes
//! plot-ready per-curve CSV files of the two information values.
//!
//! Every JSON report is deterministic for a fixed configuration (the
//! `metadata` field carries the only run-dependent values) and embeds the
//! resolved configuration for replay.
//!
//! Exit codes: 0 all checks passed / verdict confirmed; 1 a check failed /
//! premise violated; 2 usage or configuration error; 3 inconclusive.

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use readout_rigidity::admissibility::{
    classical_fisher_along, haar_samples, nearest_vertex_distance, run_admissibility, CurveSuite,
    H1_DEFAULT_TOL,
};
use readout_rigidity::escort::{escort_self_map, run_scan, ScanMode, SCAN_DEFAULT_GRID, SCAN_RECHECK_GRID};
use readout_rigidity::projective::{quantum_fisher, PureCurve, Ray};
use readout_rigidity::readout::{sqrt_readout, GeneratorSpec, ReadoutSpec};
use readout_rigidity::report::RigidityConclusion;
use readout_rigidity::rigidity::{readout_rigidity_check, simplex_rigidity_check};
use readout_rigidity::sampling::RNG_ALGORITHM;
use readout_rigidity::simplex::{SimplexPoint, SimplexSelfMap};
use readout_rigidity::{RngSeed, Tolerances, DEFAULT_FD_STEP, DEFAULT_TOL_EQ, DEFAULT_TOL_INEQ};

const SCHEMA_VERSION: u32 = 1;

/// Guard added to the quantum value when forming the reported ratio, so
/// stationary nodes divide cleanly.
const RATIO_GUARD: f64 = 1e-30;

#[derive(Parser)]
#[command(
    name = "readout-rigidity",
    version,
    about = "Certify fixed-basis readout maps with information-geometric admissibility and rigidity checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the admissibility checks (continuity, information bound,
    /// calibration) and measure the Born deviation of a readout.
    Check(CheckArgs),
    /// Full readout verdict: admissibility plus the contraction chain;
    /// exits 0 only on BORN_CONFIRMED.
    Rigidity(CheckArgs),
    /// Identity-rigidity verdict for a simplex self-map.
    SimplexRigidity(SimplexArgs),
    /// Functional-equation scans for an escort generator; passing scans
    /// are re-certified on a finer grid.
    ScanF(ScanArgs),
    /// Write per-curve CSV files with the information values along the
    /// curve suite (plus the coordinate-plane equator as a reference).
    GeodesicDump(DumpArgs),
}

#[derive(Args)]
struct CheckArgs {
    /// Readout spec: born | uniform | permuted:2,1,3 | escort:power:2.0 |
    /// escort:linear:0.5 | escort:table:path.csv | perturbed:0.1
    #[arg(long)]
    readout: String,
    /// Outcome-space dimension.
    #[arg(long)]
    d: usize,
    /// Haar geodesic pairs in the curve suite (vertex geodesics and great
    /// circles are always added).
    #[arg(long, default_value_t = 24)]
    curves: usize,
    /// Haar sample rays for the deviation and chain measurements.
    #[arg(long, default_value_t = 200)]
    samples: usize,
    /// Grid nodes per curve, endpoints included.
    #[arg(long, default_value_t = 48)]
    nodes: usize,
    /// Seed for all sampled objects.
    #[arg(long, env = "READOUT_RIGIDITY_SEED", default_value_t = 42)]
    seed: u64,
    /// Absolute tolerance for quantities that should vanish.
    #[arg(long, default_value_t = DEFAULT_TOL_EQ)]
    tol_eq: f64,
    /// Slack for one-sided bounds.
    #[arg(long, default_value_t = DEFAULT_TOL_INEQ)]
    tol_ineq: f64,
    /// Tolerance on the distributed refinement gain of the continuity check.
    #[arg(long, default_value_t = H1_DEFAULT_TOL)]
    tol_h1: f64,
    /// Also write the JSON report to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimplexArgs {
    /// Map spec: identity | barycenter | escort:power:2.0 |
    /// escort:linear:0.5 | escort:table:path.csv
    #[arg(long)]
    map: String,
    /// Simplex dimension (number of outcomes).
    #[arg(long)]
    d: usize,
    /// Interior sample points for the non-expansion sweep.
    #[arg(long, default_value_t = 500)]
    samples: usize,
    /// Seed for all sampled objects.
    #[arg(long, env = "READOUT_RIGIDITY_SEED", default_value_t = 42)]
    seed: u64,
    /// Absolute tolerance for quantities that should vanish.
    #[arg(long, default_value_t = DEFAULT_TOL_EQ)]
    tol_eq: f64,
    /// Also write the JSON report to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ScanArgs {
    /// Generator spec: identity | power:2.0 | linear:0.5 | table:path.csv
    #[arg(long)]
    f: String,
    /// Scan mode: normalization | cauchy | markov | linear-fit
    #[arg(long)]
    mode: String,
    /// Simplex dimensions for normalization scans (comma separated).
    #[arg(long, value_delimiter = ',', default_values_t = [3usize, 4, 5])]
    dims: Vec<usize>,
    /// Grid nodes per axis.
    #[arg(long, default_value_t = SCAN_DEFAULT_GRID)]
    grid: usize,
    /// Absolute residual tolerance.
    #[arg(long, default_value_t = DEFAULT_TOL_EQ)]
    tol_eq: f64,
    /// Also write the JSON report to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DumpArgs {
    /// Readout spec, as for `check`.
    #[arg(long)]
    readout: String,
    /// Outcome-space dimension.
    #[arg(long)]
    d: usize,
    /// Haar geodesic pairs in the dumped suite.
    #[arg(long, default_value_t = 6)]
    curves: usize,
    /// Grid nodes per curve, endpoints included; rows cover the interior.
    #[arg(long, default_value_t = 48)]
    nodes: usize,
    /// Seed for all sampled objects.
    #[arg(long, env = "READOUT_RIGIDITY_SEED", default_value_t = 42)]
    seed: u64,
    /// Directory for the per-curve CSV files (created if missing).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Serialize)]
struct Report {
    schema_version: u32,
    config: Value,
    verdicts: Vec<Value>,
    witnesses: Vec<Value>,
    metadata: Value,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check(args) => run_check(args, false),
        Command::Rigidity(args) => run_check(args, true),
        Command::SimplexRigidity(args) => run_simplex(args),
        Command::ScanF(args) => run_scan_f(args),
        Command::GeodesicDump(args) => run_dump(args),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

type CliResult = Result<ExitCode, Box<dyn std::error::Error>>;

fn metadata() -> Value {
    let now_ms = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0);
    json!({
        "timestamp_unix_ms": now_ms,
        "crate_version": env!("CARGO_PKG_VERSION"),
        "rng_algorithm": RNG_ALGORITHM,
    })
}

/// Prints the report to standard output and mirrors it to `out` if given.
fn emit(report: &Report, out: Option<&PathBuf>) -> CliResult {
    let rendered = serde_json::to_string_pretty(report)?;
    println!("{rendered}");
    if let Some(path) = out {
        fs::write(path, rendered + "\n")?;
    }
    Ok(ExitCode::SUCCESS)
}

/// Serializes a check result into a named verdict entry; the witness (if
/// any) is moved to the report-level `witnesses` list.
fn verdict_entry<T: Serialize>(name: &str, value: &T, witnesses: &mut Vec<Value>) -> Value {
    let mut entry = serde_json::to_value(value).expect("check results serialize");
    if let Some(obj) = entry.as_object_mut() {
        if let Some(w) = obj.remove("witness") {
            if !w.is_null() {
                witnesses.push(w);
            }
        }
        obj.insert("name".into(), json!(name));
    }
    entry
}

fn run_check(args: CheckArgs, full: bool) -> CliResult {
    let readout = ReadoutSpec::parse(&args.readout)?.build(args.d)?;
    let suite = CurveSuite::default_suite(args.d, args.curves, RngSeed(args.seed), args.nodes)?;
    let samples = haar_samples(args.d, args.samples, RngSeed(args.seed))?;
    let tol = Tolerances {
        eq: args.tol_eq,
        ineq: args.tol_ineq,
    };
    let config = json!({
        "command": if full { "rigidity" } else { "check" },
        "readout": args.readout,
        "d": args.d,
        "curves": args.curves,
        "samples": args.samples,
        "nodes": args.nodes,
        "seed": args.seed,
        "tol_eq": args.tol_eq,
        "tol_ineq": args.tol_ineq,
        "tol_h1": args.tol_h1,
    });

    let mut witnesses = Vec::new();
    let (verdicts, code) = if full {
        let verdict = readout_rigidity_check(&readout, &suite, &samples, tol, args.tol_h1);
        let code = match verdict.conclusion {
            RigidityConclusion::BornConfirmed | RigidityConclusion::IdentityConfirmed => 0u8,
            RigidityConclusion::PremiseViolated => 1,
            RigidityConclusion::Inconclusive => 3,
        };
        (vec![verdict_entry("rigidity", &verdict, &mut witnesses)], code)
    } else {
        let report = run_admissibility(&readout, &suite, &samples, tol, args.tol_h1);
        let code = if report.all_passed() { 0 } else { 1 };
        (
            vec![
                verdict_entry("h1", &report.h1, &mut witnesses),
                verdict_entry("h2", &report.h2, &mut witnesses),
                verdict_entry("h3", &report.h3, &mut witnesses),
                verdict_entry("born_deviation", &report.born_deviation, &mut witnesses),
            ],
            code,
        )
    };

    let report = Report {
        schema_version: SCHEMA_VERSION,
        config,
        verdicts,
        witnesses,
        metadata: metadata(),
    };
    emit(&report, args.out.as_ref())?;
    Ok(ExitCode::from(code))
}

fn parse_map(spec: &str, d: usize) -> Result<SimplexSelfMap, Box<dyn std::error::Error>> {
    match spec {
        "identity" => Ok(SimplexSelfMap::identity(d)),
        "barycenter" => Ok(SimplexSelfMap::constant(
            "barycenter",
            SimplexPoint::uniform(d),
        )),
        other => match other.strip_prefix("escort:") {
            Some(gen) => Ok(escort_self_map(GeneratorSpec::parse(gen)?.build()?, d)),
            None => Err(format!(
                "unknown map spec '{other}': expected identity | barycenter | escort:<generator>"
            )
            .into()),
        },
    }
}

fn run_simplex(args: SimplexArgs) -> CliResult {
    let map = parse_map(&args.map, args.d)?;
    let config = json!({
        "command": "simplex-rigidity",
        "map": args.map,
        "d": args.d,
        "samples": args.samples,
        "seed": args.seed,
        "tol_eq": args.tol_eq,
    });

    let verdict = simplex_rigidity_check(&map, RngSeed(args.seed), args.samples, args.tol_eq);
    let code = match verdict.conclusion {
        RigidityConclusion::IdentityConfirmed | RigidityConclusion::BornConfirmed => 0u8,
        RigidityConclusion::PremiseViolated => 1,
        RigidityConclusion::Inconclusive => 3,
    };
    let mut witnesses = Vec::new();
    let report = Report {
        schema_version: SCHEMA_VERSION,
        config,
        verdicts: vec![verdict_entry("rigidity", &verdict, &mut witnesses)],
        witnesses,
        metadata: metadata(),
    };
    emit(&report, args.out.as_ref())?;
    Ok(ExitCode::from(code))
}

fn run_scan_f(args: ScanArgs) -> CliResult {
    let generator = GeneratorSpec::parse(&args.f)?.build()?;
    let mode = ScanMode::parse(&args.mode)?;
    let config = json!({
        "command": "scan-f",
        "f": args.f,
        "mode": mode.to_string(),
        "dims": args.dims,
        "grid": args.grid,
        "tol_eq": args.tol_eq,
    });

    let mut witnesses = Vec::new();
    let mut verdicts = Vec::new();
    let first = run_scan(&generator, mode, &args.dims, args.grid, args.tol_eq)?;
    if let Some(w) = first.witness() {
        witnesses.push(serde_json::to_value(&w)?);
    }
    let mut passed = first.verdict.passed();
    verdicts.push(verdict_entry(&format!("{mode}@{}", args.grid), &first, &mut witnesses));

    // A pass certifies only after surviving a finer grid.
    if passed && args.grid < SCAN_RECHECK_GRID {
        let recheck = run_scan(&generator, mode, &args.dims, SCAN_RECHECK_GRID, args.tol_eq)?;
        if let Some(w) = recheck.witness() {
            witnesses.push(serde_json::to_value(&w)?);
        }
        passed = recheck.verdict.passed();
        verdicts.push(verdict_entry(
            &format!("{mode}@{SCAN_RECHECK_GRID}"),
            &recheck,
            &mut witnesses,
        ));
    }

    let report = Report {
        schema_version: SCHEMA_VERSION,
        config,
        verdicts,
        witnesses,
        metadata: metadata(),
    };
    emit(&report, args.out.as_ref())?;
    Ok(ExitCode::from(if passed { 0 } else { 1 }))
}

fn sanitize_label(label: &str) -> String {
    label
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' {
                c.to_ascii_lowercase()
            } else {
                '-'
            }
        })
        .collect()
}

fn run_dump(args: DumpArgs) -> CliResult {
    let readout = ReadoutSpec::parse(&args.readout)?.build(args.d)?;
    let equator = PureCurve::great_circle(
        "equator",
        &Ray::basis(args.d, 0),
        &Ray::basis(args.d, 1),
    )?;
    let suite = CurveSuite::default_suite(args.d, args.curves, RngSeed(args.seed), args.nodes)?;
    fs::create_dir_all(&args.out)?;

    let curves: Vec<&PureCurve> = std::iter::once(&equator).chain(suite.curves()).collect();
    for (idx, curve) in curves.iter().enumerate() {
        let (a, b) = curve.domain();
        let n = args.nodes;
        let spacing = (b - a) / (n - 1) as f64;
        let h = DEFAULT_FD_STEP.min(spacing / 4.0);
        let path = args
            .out
            .join(format!("curve-{idx:02}-{}.csv", sanitize_label(curve.label())));
        let mut file = fs::File::create(&path)?;
        write!(file, "s,f_q,f_cl,ratio,d_fs_nearest_vertex")?;
        for i in 1..=args.d {
            write!(file, ",r_{i}")?;
        }
        writeln!(file)?;
        for k in 1..n - 1 {
            let s = a + spacing * k as f64;
            let f_q = quantum_fisher(curve, s, h)?;
            let f_cl = classical_fisher_along(&readout, curve, s, h)?;
            let ratio = f_cl / (f_q + RATIO_GUARD);
            let psi = curve.eval(s);
            let vertex_distance = nearest_vertex_distance(&psi);
            write!(file, "{s},{f_q},{f_cl},{ratio},{vertex_distance}")?;
            for c in sqrt_readout(&readout, &psi).coords() {
                write!(file, ",{c}")?;
            }
            writeln!(file)?;
        }
        println!("{}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}
