//! `qest`: simulate measurement records, estimate quantum states three
//! ways, score the estimators against each other, classify prior
//! fragility, and recompute the built-in analytic reference values.
//!
//! Every run is reproducible: all randomness flows from `--seed`, thread
//! count never changes numbers, and each output file gets a manifest
//! sidecar with its SHA-256 digest.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use qest_core::bayes::{run_sampler, PosteriorTrace, SamplerConfig};
use qest_core::divergence::{game_rows_csv, run_game, GameConfig};
use qest_core::measurement::simulate_record;
use qest_core::mle::{mle_estimate, MleConfig};
use qest_core::report;
use qest_core::robustness::{classify_prior, record_annihilates};
use qest_core::tomography::tomographic_estimate;
use qest_core::ErrorCategory;

mod checks;
mod manifest;
mod parse;

#[derive(Parser)]
#[command(
    name = "qest",
    version,
    about = "Quantum-state estimation: tomography, maximum likelihood, and posterior means"
)]
struct Cli {
    /// Worker threads for parallel sections (0 = automatic). The thread
    /// count never changes numerical results.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a measurement record from a known state.
    Simulate(SimulateArgs),
    /// Run one estimator on a record and write its report.
    Estimate(EstimateArgs),
    /// Play the estimator-comparison game over prior-drawn states.
    Compare(CompareArgs),
    /// Classify whether a prior can be annihilated by finite data.
    CheckPrior(CheckPriorArgs),
    /// Recompute the built-in analytic reference values; nonzero exit on
    /// any failing row.
    Selftest,
}

#[derive(Args)]
struct SimulateArgs {
    /// State spec: pure:<i> | mixed[:<dim>] | bloch:<x>,<y>,<z> |
    /// tilted-xz | file:<path>.
    #[arg(long)]
    state: String,
    /// POVM set: pauli-x|y|z|xz|xyz | file:<path>.
    #[arg(long, default_value = "pauli-xyz")]
    povms: String,
    /// Shots per POVM.
    #[arg(long)]
    shots: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Record JSON destination (stdout when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    /// Linear inversion of observed frequencies.
    Tomo,
    /// Constrained maximum likelihood.
    Mle,
    /// Posterior mean under a prior.
    Bme,
}

#[derive(Args)]
struct EstimateArgs {
    #[arg(long, value_enum)]
    method: Method,
    /// Record source: a JSON file path or fixture:<name>.
    #[arg(long)]
    record: String,
    /// Prior for the posterior mean: hs | haar | induced:<k> | bernoulli
    /// | equator | coin-endpoints.
    #[arg(long, default_value = "hs")]
    prior: String,
    #[arg(long, default_value_t = 10_000)]
    burn_in: usize,
    /// Post-burn-in samples per chain.
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, default_value_t = 4)]
    chains: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the tallied coordinate trajectory as CSV (posterior mean
    /// only).
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Report JSON destination (stdout when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    /// Drawing/sampling prior (induced family): hs | induced:<k>.
    #[arg(long, default_value = "hs")]
    prior: String,
    #[arg(long, default_value = "pauli-xyz")]
    povms: String,
    /// Shots per POVM per trial.
    #[arg(long, default_value_t = 3)]
    shots: u64,
    #[arg(long)]
    trials: usize,
    /// Scoring divergence: hs | kl | kl:<floor>.
    #[arg(long, default_value = "hs")]
    divergence: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 2_000)]
    burn_in: usize,
    #[arg(long, default_value_t = 20_000)]
    samples: usize,
    #[arg(long, default_value_t = 2)]
    chains: usize,
    /// Game report JSON destination (stdout when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
    /// Per-trial table destination.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct CheckPriorArgs {
    /// Prior spec: hs | haar | induced:<k> | bernoulli | equator |
    /// coin-endpoints.
    #[arg(long)]
    prior: String,
    /// State dimension the prior lives on.
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Optional record (file or fixture:<name>) to test for annihilation
    /// against a finite-support prior.
    #[arg(long)]
    record: Option<String>,
    /// Verdict JSON destination (stdout when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
        {
            eprintln!("error: configuring {} threads: {e}", cli.threads);
            return ExitCode::from(2);
        }
    }
    match run(&cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            let code = match err.downcast_ref::<qest_core::Error>() {
                Some(core) => match core.category() {
                    ErrorCategory::Input => 2,
                    ErrorCategory::MathPrecondition => 3,
                    ErrorCategory::SamplerFailure => 4,
                },
                None => 2,
            };
            ExitCode::from(code)
        }
    }
}

fn run(command: &Command) -> Result<ExitCode> {
    match command {
        Command::Simulate(args) => cmd_simulate(args),
        Command::Estimate(args) => cmd_estimate(args),
        Command::Compare(args) => cmd_compare(args),
        Command::CheckPrior(args) => cmd_check_prior(args),
        Command::Selftest => cmd_selftest(),
    }
}

/// Write `files` with a manifest when any are destined for disk; print
/// the primary payload to stdout when it has no file destination.
fn emit(
    command: &str,
    config: serde_json::Value,
    seed: Option<u64>,
    primary: (Option<&PathBuf>, String),
    secondary: Vec<(PathBuf, String)>,
) -> Result<()> {
    let mut files: Vec<(PathBuf, String)> = Vec::new();
    match primary.0 {
        Some(path) => files.push((path.clone(), primary.1)),
        None => print!("{}", primary.1),
    }
    files.extend(secondary);
    if !files.is_empty() {
        manifest::write_outputs(command, &config, seed, &files)?;
    }
    Ok(())
}

fn cmd_simulate(args: &SimulateArgs) -> Result<ExitCode> {
    let rho = parse::state(&args.state)?;
    let povms = parse::povms(&args.povms)?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let record = simulate_record(&rho, &povms, args.shots, &mut rng)?;
    let payload = record.to_json() + "\n";
    let config = json!({
        "state": args.state,
        "povms": args.povms,
        "shots": args.shots,
        "seed": args.seed,
    });
    emit(
        "simulate",
        config,
        Some(args.seed),
        (args.output.as_ref(), payload),
        Vec::new(),
    )?;
    Ok(ExitCode::SUCCESS)
}

fn trace_csv(trace: &PosteriorTrace) -> String {
    let mut out = String::new();
    for a in 0..trace.stride() {
        if a > 0 {
            out.push(',');
        }
        out.push_str(&format!("t{a}"));
    }
    out.push('\n');
    for row in trace.rows() {
        let rendered: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&rendered.join(","));
        out.push('\n');
    }
    out
}

fn cmd_estimate(args: &EstimateArgs) -> Result<ExitCode> {
    let record = parse::record(&args.record)?;
    let total = record.total_counts();
    let mut secondary = Vec::new();
    let report = match args.method {
        Method::Tomo => report::tomo_report(&tomographic_estimate(&record)?, total),
        Method::Mle => report::mle_report(&mle_estimate(&record, &MleConfig::default())?, total),
        Method::Bme => {
            let prior = parse::prior(&args.prior, record.dim())?;
            let config = SamplerConfig {
                burn_in: args.burn_in,
                samples: args.samples,
                chains: args.chains,
                seed: args.seed,
                collect_trace: args.trace.is_some(),
                ..SamplerConfig::default()
            };
            let summary = run_sampler(&record, &prior, &config)?;
            if let Some(path) = &args.trace {
                let trace = summary
                    .trace
                    .as_ref()
                    .context("sampler returned no trace (exact posterior?)")?;
                secondary.push((path.clone(), trace_csv(trace)));
            }
            report::bme_report(&summary, total)?
        }
    };
    let config = json!({
        "method": match args.method { Method::Tomo => "tomo", Method::Mle => "mle", Method::Bme => "bme" },
        "record": args.record,
        "prior": args.prior,
        "burn_in": args.burn_in,
        "samples": args.samples,
        "chains": args.chains,
        "seed": args.seed,
    });
    emit(
        "estimate",
        config,
        Some(args.seed),
        (args.output.as_ref(), report::to_json(&report)),
        secondary,
    )?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_compare(args: &CompareArgs) -> Result<ExitCode> {
    let povms = parse::povms(&args.povms)?;
    let dim = povms[0].dim();
    let game = GameConfig {
        prior: parse::prior(&args.prior, dim)?,
        povms,
        shots_per_povm: args.shots,
        trials: args.trials,
        kind: parse::divergence_kind(&args.divergence)?,
        sampler: SamplerConfig {
            burn_in: args.burn_in,
            samples: args.samples,
            chains: args.chains,
            ..SamplerConfig::default()
        },
        mle: MleConfig::default(),
        seed: args.seed,
    };
    let report = run_game(&game)?;
    let mut secondary = Vec::new();
    if let Some(path) = &args.csv {
        secondary.push((path.clone(), game_rows_csv(&report)));
    }
    let config = json!({
        "prior": args.prior,
        "povms": args.povms,
        "shots": args.shots,
        "trials": args.trials,
        "divergence": args.divergence,
        "seed": args.seed,
        "burn_in": args.burn_in,
        "samples": args.samples,
        "chains": args.chains,
    });
    let failed = report.failed_trials;
    emit(
        "compare",
        config,
        Some(args.seed),
        (args.output.as_ref(), report::to_json(&report)),
        secondary,
    )?;
    if failed * 10 > args.trials {
        eprintln!(
            "compare: {failed} of {} trials failed — treating the run as unhealthy",
            args.trials
        );
        return Ok(ExitCode::from(4));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_check_prior(args: &CheckPriorArgs) -> Result<ExitCode> {
    let prior = parse::prior(&args.prior, args.dim)?;
    let verdict = classify_prior(&prior);
    let witness_json = verdict
        .witness
        .as_ref()
        .map(|record| serde_json::from_str::<serde_json::Value>(&record.to_json()))
        .transpose()
        .expect("record JSON round-trips");
    let annihilated = args
        .record
        .as_deref()
        .map(|source| -> Result<bool> {
            let record = parse::record(source)?;
            Ok(record_annihilates(&prior, &record)?)
        })
        .transpose()?;
    let payload = json!({
        "prior": args.prior,
        "dim": args.dim,
        "verdict": verdict.verdict,
        "rationale": verdict.rationale,
        "witness": witness_json,
        "record_annihilates": annihilated,
    });
    let config = json!({
        "prior": args.prior,
        "dim": args.dim,
        "record": args.record,
    });
    emit(
        "check-prior",
        config,
        None,
        (
            args.output.as_ref(),
            serde_json::to_string_pretty(&payload).expect("verdict serializes") + "\n",
        ),
        Vec::new(),
    )?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_selftest() -> Result<ExitCode> {
    let rows = checks::reference_rows()?;
    if checks::print_rows(&rows) {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}
