mod matrix_file;
mod suite_io;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use accretive::funcalc::{apply_function, catalog, DEFAULT_ORDER, MAX_ORDER, MIN_ORDER};
use accretive::means::{arithmetic_mean, geometric_mean, geometric_neg, harmonic_mean, sigma_mean};
use accretive::sector::{certify, is_accretive, random_sectorial, EnsembleSpec};
use accretive::verify::{default_suite, run_suite, SUITE_ORDER};
use accretive::{ComplexMatrix, Error};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use matrix_file::MatrixFile;
use suite_io::{render_report, SuiteConfigFile};

#[derive(Parser)]
#[command(name = "amm", version, about = "Matrix means and monotone functions of accretive matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a mean of two matrices or a function of one.
    Compute(ComputeArgs),
    /// Print the sectorial angle and real-part bounds of a matrix.
    Angle {
        #[arg(long)]
        a: PathBuf,
    },
    /// Write a seeded ensemble of sectorial matrices.
    Gen(GenArgs),
    /// Run a verification suite and write a JSON report.
    Suite(SuiteArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    Harmonic,
    Arithmetic,
    Geometric,
    GeometricNeg,
    Sigma,
    Func,
}

#[derive(Args)]
struct ComputeArgs {
    #[arg(long, value_enum)]
    op: Op,
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: Option<PathBuf>,
    #[arg(long, conflicts_with_all = ["t", "func"])]
    lambda: Option<f64>,
    #[arg(long, conflicts_with = "func")]
    t: Option<f64>,
    #[arg(long = "fn")]
    func: Option<String>,
    #[arg(long)]
    param: Option<f64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    m: f64,
    #[arg(long = "M")]
    big_m: f64,
    #[arg(long)]
    count: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["config", "default"])))]
struct SuiteArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Run the built-in catalog.
    #[arg(long)]
    default: bool,
    #[arg(long)]
    report: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    jobs: Option<u32>,
    /// Record wall-clock times in the report.
    #[arg(long)]
    timings: bool,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidInput(_) | Error::Parameter(_) => 2,
            Error::Precondition { .. } | Error::Domain(_) => 3,
            Error::Singular { .. } | Error::NumericFailure { .. } => 4,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn quad_order(default: usize) -> Result<usize, Failure> {
    match std::env::var("AMM_QUAD_ORDER") {
        Err(_) => Ok(default),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if (MIN_ORDER..=MAX_ORDER).contains(&n) => Ok(n),
            _ => Err(Failure::usage(format!(
                "AMM_QUAD_ORDER must be an integer in [{MIN_ORDER}, {MAX_ORDER}], got '{s}'"
            ))),
        },
    }
}

fn read_matrix(path: &Path) -> Result<ComplexMatrix, Failure> {
    MatrixFile::read(path).map_err(Failure::usage)
}

fn cmd_compute(args: &ComputeArgs) -> Result<(), Failure> {
    let order = quad_order(DEFAULT_ORDER)?;
    let a = read_matrix(&args.a)?;
    let b = match (&args.b, args.op) {
        (_, Op::Func) => None,
        (Some(p), _) => Some(read_matrix(p)?),
        (None, _) => return Err(Failure::usage("--b is required for binary operations")),
    };
    let weight = || {
        args.lambda
            .or(args.t)
            .ok_or_else(|| Failure::usage("this operation needs --lambda or --t"))
    };
    let function = || match &args.func {
        Some(name) => Ok(catalog(name, args.param)?),
        None => Err(Failure::usage("this operation needs --fn")),
    };
    let b = || b.as_ref().expect("binary operand");
    let result = match args.op {
        Op::Harmonic => harmonic_mean(&a, b(), weight()?)?,
        Op::Arithmetic => arithmetic_mean(&a, b(), weight()?)?,
        Op::Geometric => geometric_mean(&a, b(), weight()?, order)?,
        Op::GeometricNeg => geometric_neg(&a, b(), weight()?, order)?,
        Op::Sigma => sigma_mean(&a, b(), &function()?, order)?,
        Op::Func => apply_function(&function()?, &a, order)?,
    };
    MatrixFile::write(&result, &args.out).map_err(Failure::usage)
}

#[derive(Serialize)]
struct AngleOut {
    accretive: bool,
    alpha_radians: f64,
    m: f64,
    #[serde(rename = "M")]
    big_m: f64,
}

fn cmd_angle(path: &Path) -> Result<(), Failure> {
    let a = read_matrix(path)?;
    let (accretive, margin) = is_accretive(&a);
    if !accretive {
        return Err(Failure {
            code: 3,
            message: format!("matrix is not accretive (margin {margin:e})"),
        });
    }
    let c = certify(&a)?;
    let out = AngleOut {
        accretive,
        alpha_radians: c.alpha,
        m: c.m,
        big_m: c.big_m,
    };
    println!("{}", serde_json::to_string(&out).expect("serializes"));
    Ok(())
}

fn cmd_gen(args: &GenArgs) -> Result<(), Failure> {
    let spec = EnsembleSpec {
        dim: args.dim,
        alpha_max: args.alpha,
        m: args.m,
        big_m: args.big_m,
        count: args.count,
        seed: args.seed,
    };
    spec.validate().map_err(|e| Failure::usage(e.to_string()))?;
    fs::create_dir_all(&args.out).map_err(|e| Failure::usage(format!("{}: {e}", args.out.display())))?;
    for i in 0..args.count {
        let a = random_sectorial(&spec, i)?;
        MatrixFile::write(&a, &args.out.join(format!("sample_{i}.json"))).map_err(Failure::usage)?;
    }
    Ok(())
}

fn cmd_suite(args: &SuiteArgs) -> Result<(), Failure> {
    let entries = match &args.config {
        Some(path) => {
            let order = quad_order(DEFAULT_ORDER)?;
            let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            let config: SuiteConfigFile =
                serde_json::from_str(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            config.entries(order).map_err(Failure::usage)?
        }
        None => default_suite(quad_order(SUITE_ORDER)?),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs.map_or(0, |j| j as usize))
        .build()
        .map_err(|e| Failure::usage(e.to_string()))?;
    let start = Instant::now();
    let reports = pool.install(|| run_suite(&entries));
    let total_ms = start.elapsed().as_secs_f64() * 1e3;
    let text = render_report(&entries, &reports, args.timings, total_ms);
    fs::write(&args.report, text).map_err(|e| Failure::usage(format!("{}: {e}", args.report.display())))?;
    let failed: Vec<_> = reports.iter().filter(|r| !r.pass).collect();
    if failed.is_empty() {
        return Ok(());
    }
    for r in &failed {
        match &r.error {
            Some(e) => eprintln!("FAIL {} ({}, n={}, alpha={}): {e}", r.check, r.function, r.ensemble.dim, r.ensemble.alpha_max),
            None => eprintln!(
                "FAIL {} ({}, n={}, alpha={}): min margin {:e} at sample {}",
                r.check, r.function, r.ensemble.dim, r.ensemble.alpha_max, r.min_margin, r.worst_index
            ),
        }
    }
    Err(Failure {
        code: 5,
        message: format!("{} of {} checks failed", failed.len(), reports.len()),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Compute(args) => cmd_compute(args),
        Command::Angle { a } => cmd_angle(a),
        Command::Gen(args) => cmd_gen(args),
        Command::Suite(args) => cmd_suite(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
