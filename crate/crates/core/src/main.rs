use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use bell_commit::harness::{
    acceptance_matrix, hiding_report, run_experiment, selftest::run_selftest, ExperimentConfig,
    HarnessError, OutputFormat, Report, Strategy,
};
use bell_commit::protocol::{BcPolicy, CommitValue};

/// Bell-pair commitment simulator and Pauli-flip cheating experiments.
///
/// Exit status: 0 when every assertion held, 1 when one failed (for
/// instance a detected cheat), 2 on invalid configuration.
#[derive(Debug, Parser)]
#[command(name = "bellcommit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one experiment of `--trials` protocol executions.
    Run(ExperimentArgs),
    /// Acceptance rates for the cheat row and the honest / control table.
    Matrix(ExperimentArgs),
    /// Trace distances between C-side states of different committed values.
    Hiding(ExperimentArgs),
    /// Run the built-in invariant checks.
    Selftest(ExperimentArgs),
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    /// Bell pairs per commitment.
    #[arg(long, default_value_t = 8)]
    pairs: usize,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    /// honest | cheat | control
    #[arg(long, default_value = "honest")]
    strategy: Strategy,
    /// bit0 | bit1 | plus | minus
    #[arg(long, default_value = "bit0")]
    commit: CommitValue,
    /// Value announced at reveal; defaults to the committed value.
    #[arg(long)]
    reveal: Option<CommitValue>,
    /// none | random-local | random-entangled
    #[arg(long = "bc-ops", default_value = "none")]
    bc_ops: BcPolicy,
    #[arg(long, default_value_t = 0)]
    ancillas: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    /// text | json | csv
    #[arg(long, default_value = "text")]
    format: OutputFormat,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl ExperimentArgs {
    fn config(&self) -> ExperimentConfig {
        ExperimentConfig {
            n_pairs: self.pairs,
            trials: self.trials,
            strategy: self.strategy,
            commit_value: self.commit,
            reveal_value: self.reveal.unwrap_or(self.commit),
            bc_policy: self.bc_ops,
            m_ancillas: self.ancillas,
            master_seed: self.seed,
            tolerance: self.tolerance,
            output: self.format,
        }
    }
}

fn execute(command: &Command) -> Result<(Report, &ExperimentArgs), HarnessError> {
    let (args, report) = match command {
        Command::Run(args) => {
            let config = args.config();
            (args, Report::for_run(&config, run_experiment(&config)?))
        }
        Command::Matrix(args) => {
            let config = args.config();
            (
                args,
                Report::for_matrix(&config, acceptance_matrix(&config)?),
            )
        }
        Command::Hiding(args) => {
            let config = args.config();
            (args, Report::for_hiding(&config, hiding_report(&config)?))
        }
        Command::Selftest(args) => {
            let config = args.config();
            (
                args,
                Report::for_selftest(&config, run_selftest(config.master_seed)?),
            )
        }
    };
    Ok((report, args))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (report, args) = match execute(&cli.command) {
        Ok(done) => done,
        Err(e @ HarnessError::Config(_)) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let rendered = match report.render(args.format) {
        Ok(text) => text,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &rendered) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{rendered}"),
    }
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
