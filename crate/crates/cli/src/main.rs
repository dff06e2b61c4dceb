use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod error;
mod input;
mod output;

use error::CliError;

pub const DEFAULT_SEED: u64 = 1;

/// Walk-in student support office simulator.
#[derive(Parser, Debug)]
#[command(name = "isst", version, about)]
struct Cli {
    /// Directory for result files; nothing is written to disk without it.
    #[arg(long, short = 'o', global = true, env = "ISST_OUTPUT_DIR")]
    output_dir: Option<PathBuf>,

    /// Format of what goes to standard output.
    #[arg(long, short = 'f', global = true, value_enum)]
    format: Option<Format>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Md,
}

#[derive(Args, Debug, Clone)]
pub struct ScenarioArgs {
    /// Scenario TOML file; the built-in calibration when omitted.
    #[arg(long, short = 's')]
    pub scenario: Option<PathBuf>,

    /// Override one scenario value, e.g. `--set rules.speedup_factor=0.75`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,

    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Args, Debug, Clone)]
pub struct TestArgs {
    /// Significance level for the t-tests.
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,

    /// Pooled-variance t-test instead of Welch.
    #[arg(long)]
    pub pooled: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Simulate one day.
    Run {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Overrides the scenario's own mode.
        #[arg(long, short = 'm')]
        mode: Option<String>,
        #[arg(long, default_value_t = 0)]
        replication: u64,
        /// Also write an event log (`trace.jsonl`, one event per line).
        #[arg(long)]
        trace: bool,
    },
    /// Replicate one experiment in one mode.
    Experiment {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// E1 to E5.
        #[arg(long, short = 'e')]
        experiment: String,
        #[arg(long, short = 'm')]
        mode: Option<String>,
        #[arg(long, short = 'r', default_value_t = 100)]
        replications: u32,
        /// Common random numbers across experiments.
        #[arg(long)]
        crn: bool,
    },
    /// All five experiments in both modes, with the summary and comparison tables.
    Suite {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long, short = 'r', default_value_t = 100)]
        replications: u32,
        #[arg(long)]
        crn: bool,
        #[command(flatten)]
        test: TestArgs,
    },
    /// t-tests between two result sets, each `FILE[#EXPERIMENT][/MODE]`.
    Compare {
        a: String,
        b: String,
        #[command(flatten)]
        test: TestArgs,
    },
    /// Summary and comparison tables from saved per-replication results.
    Render {
        #[arg(required = true)]
        inputs: Vec<String>,
        #[command(flatten)]
        test: TestArgs,
    },
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let out = output::Output::new(cli.output_dir, cli.format);
    match cli.command {
        Command::Run {
            scenario,
            mode,
            replication,
            trace,
        } => commands::run(&out, &scenario, mode.as_deref(), replication, trace),
        Command::Experiment {
            scenario,
            experiment,
            mode,
            replications,
            crn,
        } => commands::experiment(
            &out,
            &scenario,
            &experiment,
            mode.as_deref(),
            replications,
            crn,
        ),
        Command::Suite {
            scenario,
            replications,
            crn,
            test,
        } => commands::suite(&out, &scenario, replications, crn, &test),
        Command::Compare { a, b, test } => commands::compare(&out, &a, &b, &test),
        Command::Render { inputs, test } => commands::render(&out, &inputs, &test),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
