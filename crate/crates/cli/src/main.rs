//! `featsel` — benchmark CLI for horizon-aware visual feature selection.
//!
//! Subcommands: `gen` (resolve a scenario and print its digest and
//! candidate summary), `select` (run one algorithm on one seed), `bench`
//! (full algorithm x seed matrix to CSV/JSON) and `verify` (run the
//! built-in property suites).
//!
//! Exit codes: 0 success, 1 verification failure, 2 config error,
//! 3 infeasible scenario, 4 guard refusal (oversized exhaustive search).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use featsel_core::report::{self, ReportFormat};
use featsel_core::runner::{self, RunError};
use featsel_core::scenario::{self, Algorithm, ScenarioConfig, ScenarioError};
use featsel_core::selection;

mod verify;

const EXIT_CONFIG: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;
const EXIT_GUARD: u8 = 4;

#[derive(Parser)]
#[command(
    name = "featsel",
    version,
    about = "Greedy feature selection benchmark harness"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArg {
    /// Scenario config (strict TOML).
    #[arg(long)]
    config: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Resolve a scenario and emit its digest plus candidate summary.
    Gen {
        #[command(flatten)]
        config: ConfigArg,
        /// Run seed mixed into feature placement.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the JSON summary here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one algorithm on one seed and print the selection result.
    Select {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Algorithm to run (greedy|stochastic|surrogate|brute).
        #[arg(long = "algos", value_delimiter = ',')]
        algos: Vec<Algorithm>,
    },
    /// Full benchmark matrix: every requested algorithm on every seed.
    Bench {
        #[command(flatten)]
        config: ConfigArg,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "csv")]
        format: ReportFormat,
        /// Override the config's algorithm list.
        #[arg(long = "algos", value_delimiter = ',')]
        algos: Vec<Algorithm>,
        /// Worker threads (0 = automatic).
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
    /// Run the property suites: trace identity, submodularity and
    /// monotonicity samples, greedy-vs-oracle ratios.
    Verify {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn scenario_exit(err: &ScenarioError) -> u8 {
    match err {
        ScenarioError::Infeasible { .. } => EXIT_INFEASIBLE,
        _ => EXIT_CONFIG,
    }
}

fn run_exit(err: &RunError) -> u8 {
    match err {
        RunError::Scenario(e) => scenario_exit(e),
        RunError::GuardRefused { .. } => EXIT_GUARD,
        RunError::Selection(selection::SelectionError::BruteForceTooLarge { .. }) => EXIT_GUARD,
        _ => EXIT_CONFIG,
    }
}

fn fail(code: u8, message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(code)
}

fn load_config(path: &std::path::Path) -> Result<ScenarioConfig, ScenarioError> {
    ScenarioConfig::load(path)
}

fn cmd_gen(config: &ScenarioConfig, seed: u64, out: Option<PathBuf>) -> ExitCode {
    let scenario = match scenario::generate_scenario(config, seed) {
        Ok(s) => s,
        Err(e) => return fail(scenario_exit(&e), e),
    };
    let candidates: Vec<serde_json::Value> = scenario
        .candidates
        .values()
        .map(|info| {
            serde_json::json!({
                "id": info.id,
                "n_frames": info.n_frames,
                "trace": report::round_sig12(info.trace),
            })
        })
        .collect();
    let summary = serde_json::json!({
        "digest": config.digest(),
        "rng": scenario::RNG_NAME,
        "seed": seed,
        "horizon": config.horizon,
        "stacked_dim": scenario.prior.dim(),
        "features_sampled": config.features.count,
        "triangulable": scenario.candidates.len(),
        "candidates": candidates,
        "rejected": scenario.rejected,
    });
    let text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, text) {
                return fail(EXIT_CONFIG, format!("cannot write {}: {e}", path.display()));
            }
        }
        None => println!("{text}"),
    }
    ExitCode::SUCCESS
}

fn cmd_select(config: &ScenarioConfig, seed: u64, algos: &[Algorithm]) -> ExitCode {
    let algorithm = match algos {
        [one] => *one,
        [] => return fail(EXIT_CONFIG, "select requires exactly one --algos entry"),
        _ => return fail(EXIT_CONFIG, "select takes a single algorithm"),
    };
    let scenario = match scenario::generate_scenario(config, seed) {
        Ok(s) => s,
        Err(e) => return fail(scenario_exit(&e), e),
    };
    let objective = match scenario.objective() {
        Ok(o) => o,
        Err(e) => return fail(EXIT_CONFIG, e),
    };
    let result = match algorithm {
        Algorithm::Greedy => selection::greedy(&objective, config.q),
        Algorithm::Stochastic => {
            selection::stochastic_greedy(&objective, config.q, config.epsilon, seed)
        }
        Algorithm::Surrogate => selection::surrogate_greedy(&objective, config.q),
        Algorithm::Brute => selection::brute_force(&objective, config.q),
    };
    match result {
        Ok(res) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&res).expect("result serializes")
            );
            ExitCode::SUCCESS
        }
        Err(e @ selection::SelectionError::BruteForceTooLarge { .. }) => fail(EXIT_GUARD, e),
        Err(e) => fail(EXIT_CONFIG, e),
    }
}

fn cmd_bench(
    config: &ScenarioConfig,
    out: Option<PathBuf>,
    format: ReportFormat,
    threads: usize,
) -> ExitCode {
    let report = match runner::run_benchmark(config, threads) {
        Ok(r) => r,
        Err(e) => return fail(run_exit(&e), e),
    };
    match out {
        Some(path) => {
            if let Err(e) = report::emit_report(&report, format, &path) {
                return fail(EXIT_CONFIG, format!("cannot write {}: {e}", path.display()));
            }
        }
        None => {
            let text = match format {
                ReportFormat::Csv => report::to_csv(&report),
                ReportFormat::Json => report::to_json(&report),
            };
            print!("{text}");
        }
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Gen { config, seed, out } => match load_config(&config.config) {
            Ok(cfg) => cmd_gen(&cfg, seed, out),
            Err(e) => fail(EXIT_CONFIG, e),
        },
        Command::Select {
            config,
            seed,
            algos,
        } => match load_config(&config.config) {
            Ok(cfg) => cmd_select(&cfg, seed, &algos),
            Err(e) => fail(EXIT_CONFIG, e),
        },
        Command::Bench {
            config,
            out,
            format,
            algos,
            threads,
        } => match load_config(&config.config) {
            Ok(mut cfg) => {
                if !algos.is_empty() {
                    cfg.algorithms = algos;
                }
                cmd_bench(&cfg, out, format, threads)
            }
            Err(e) => fail(EXIT_CONFIG, e),
        },
        Command::Verify { config, seed } => match load_config(&config.config) {
            Ok(cfg) => verify::run(&cfg, seed),
            Err(e) => fail(EXIT_CONFIG, e),
        },
    }
}
