use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qestim::experiment::{write_csv, write_json};
use qestim::summary::{error_slope, read_records, summarize, Check};
use qestim::{
    load_instance, run_experiment, save_instance, Algorithm, HarnessError, RunConfig, Variant,
};
use qestim_core::instances::{generate, InstanceSpec};
use qestim_core::primitives::{Backend, MajorityMode};
use qestim_core::RngStream;

#[derive(Parser)]
#[command(
    name = "qestim",
    version,
    about = "Quantum mean and median estimation experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated instance as JSON.
    Gen(GenArgs),
    /// Run an algorithm repeatedly on an instance and record every trial.
    Run(RunArgs),
    /// Summarize records written by `run`.
    Summarize(SummarizeArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Constant,
    UniformRandom,
    BooleanDensity,
    ClosePair,
    Permutation,
    RandomDistance,
}

#[derive(clap::Args)]
struct GenArgs {
    #[arg(long)]
    kind: Kind,
    #[arg(long)]
    n: usize,
    /// Bit precision of generated values.
    #[arg(long)]
    ell: Option<u32>,
    /// Constant value.
    #[arg(long)]
    value: Option<f64>,
    /// Number of marked points for boolean-density.
    #[arg(long)]
    density: Option<usize>,
    /// Distance of the close pair.
    #[arg(long)]
    delta: Option<f64>,
    /// First point of the close pair.
    #[arg(long, default_value_t = 0)]
    p: usize,
    /// Second point of the close pair; defaults to the last point.
    #[arg(long)]
    q: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Interval,
    Median,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Subspace,
    Statevector,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(clap::Args)]
struct RunArgs {
    algorithm: Algorithm,
    #[arg(long)]
    oracle: PathBuf,
    /// Iteration counts, comma separated.
    #[arg(long, value_delimiter = ',')]
    t: Vec<u64>,
    #[arg(long)]
    ell: Option<u32>,
    /// Row-mean estimator for median.
    #[arg(long, default_value = "mean1")]
    variant: Variant,
    /// Majority vote used by mean2.
    #[arg(long, default_value = "median")]
    mode: ModeArg,
    #[arg(long)]
    trials: u64,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value = "subspace")]
    backend: BackendArg,
    #[arg(long, default_value = "csv")]
    format: Format,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct SummarizeArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    check: Check,
    /// Fail when a frequency falls below this value.
    #[arg(long)]
    min: Option<f64>,
    /// Fail unless the slope lies within `tolerance` of this value.
    #[arg(long, allow_hyphen_values = true)]
    expect: Option<f64>,
    #[arg(long, default_value_t = 0.15)]
    tolerance: f64,
}

fn missing(field: &str, kind: &str) -> HarnessError {
    HarnessError::Validation {
        field: field.into(),
        reason: format!("required for {kind}"),
    }
}

fn gen(args: GenArgs) -> Result<bool, HarnessError> {
    let n = args.n;
    let spec = match args.kind {
        Kind::Constant => InstanceSpec::Constant {
            n,
            value: args.value.ok_or_else(|| missing("value", "constant"))?,
            ell: args.ell,
        },
        Kind::UniformRandom => InstanceSpec::UniformRandom { n, ell: args.ell },
        Kind::BooleanDensity => InstanceSpec::BooleanDensity {
            n,
            ones: args
                .density
                .ok_or_else(|| missing("density", "boolean-density"))?,
        },
        Kind::ClosePair => InstanceSpec::ClosePair {
            n,
            delta: args.delta.ok_or_else(|| missing("delta", "close-pair"))?,
            p: args.p,
            q: args.q.unwrap_or(n.saturating_sub(1)),
        },
        Kind::Permutation => InstanceSpec::Permutation { n },
        Kind::RandomDistance => InstanceSpec::RandomDistance { n, ell: args.ell },
    };
    let instance = generate(&spec, &mut RngStream::new(args.seed, 0))?;
    save_instance(&instance, &args.out)?;
    Ok(true)
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, HarnessError> {
    Ok(match path {
        Some(path) => Box::new(BufWriter::new(File::create(path).map_err(|e| {
            HarnessError::Io {
                path: path.to_path_buf(),
                source: e,
            }
        })?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn run(args: RunArgs) -> Result<bool, HarnessError> {
    let instance = load_instance(&args.oracle)?;
    let config = RunConfig {
        algorithm: args.algorithm,
        t: args.t,
        ell: args.ell,
        variant: args.variant,
        mode: match args.mode {
            ModeArg::Interval => MajorityMode::Interval,
            ModeArg::Median => MajorityMode::Median,
        },
        trials: args.trials,
        seed: args.seed,
        backend: match args.backend {
            BackendArg::Subspace => Backend::Subspace,
            BackendArg::Statevector => Backend::Statevector,
        },
    };
    let records = run_experiment(&instance, &config)?;
    let out = open_output(args.out.as_deref())?;
    match args.format {
        Format::Csv => write_csv(&records, out)?,
        Format::Json => write_json(&records, out)?,
    }
    Ok(true)
}

fn point_label(s: &qestim::summary::PointSummary) -> String {
    let mut label = format!("{} n={}", s.algorithm.name(), s.n);
    if let Some(t) = s.t {
        label += &format!(" t={t}");
    }
    if let Some(m) = s.register {
        label += &format!(" M={m}");
    }
    if let Some(ell) = s.ell {
        label += &format!(" ell={ell}");
    }
    label
}

fn summarize_cmd(args: SummarizeArgs) -> Result<bool, HarnessError> {
    let records = read_records(&args.input)?;
    let points = summarize(&records);
    let mut ok = true;
    match args.check {
        Check::BoundFreq | Check::SuccessRate => {
            for s in &points {
                let freq = match args.check {
                    Check::BoundFreq => s.bound_freq,
                    _ => s.success_rate,
                };
                let pass = args.min.is_none_or(|min| freq >= min);
                ok &= pass;
                println!(
                    "{}: {freq:.4} over {} trials{}",
                    point_label(s),
                    s.trials,
                    if pass { "" } else { " FAIL" }
                );
            }
        }
        Check::Slope => {
            let slope = error_slope(&points)?;
            for s in &points {
                println!(
                    "{}: median abs_error {:.6e}",
                    point_label(s),
                    s.median_abs_error
                );
            }
            let pass = args
                .expect
                .is_none_or(|want| (slope - want).abs() <= args.tolerance);
            ok &= pass;
            println!("slope {slope:.4}{}", if pass { "" } else { " FAIL" });
        }
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Gen(args) => gen(args),
        Command::Run(args) => run(args),
        Command::Summarize(args) => summarize_cmd(args),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() { 2 } else { 1 })
        }
    }
}
