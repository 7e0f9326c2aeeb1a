//! Thin command-line front end: parse arguments, load the config, dispatch
//! to the library, print the human summary.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fucik1d::cli::{run, RunOptions};
use fucik1d::config::{Config, ExperimentKind};

#[derive(Parser)]
#[command(name = "fucik1d", version, about = "Weighted 1D p-Laplacian spectrum lab")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Path to the experiment config (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Worker pool size (defaults to the number of processors).
    #[arg(long)]
    jobs: Option<usize>,
    /// Output directory (overrides the config).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Echo the parsed config as TOML and exit.
    #[arg(long)]
    dump_config: bool,
}

#[derive(Subcommand)]
enum Command {
    /// First eigenvalue of the weighted problem.
    Eigen(Common),
    /// Points on the first nontrivial curve.
    Curve(Common),
    /// Homogenization sweep over a list of epsilons.
    Sweep(Common),
    /// Evaluate the explicit bounds and inequality checks.
    Verify(Common),
    /// Constant-weight closed-form spot checks.
    Oracle(Common),
}

impl Command {
    fn kind(&self) -> ExperimentKind {
        match self {
            Command::Eigen(_) => ExperimentKind::Eigen,
            Command::Curve(_) => ExperimentKind::Curve,
            Command::Sweep(_) => ExperimentKind::Sweep,
            Command::Verify(_) => ExperimentKind::Verify,
            Command::Oracle(_) => ExperimentKind::Oracle,
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::Eigen(c)
            | Command::Curve(c)
            | Command::Sweep(c)
            | Command::Verify(c)
            | Command::Oracle(c) => c,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let kind = cli.command.kind();
    let common = cli.command.common();

    let text = match std::fs::read_to_string(&common.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read {}: {e}", common.config.display());
            return ExitCode::from(2);
        }
    };
    let config = match Config::from_toml(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    if config.experiment.kind != kind {
        eprintln!(
            "config declares experiment kind \"{}\" but the \"{}\" subcommand was invoked",
            config.experiment.kind.label(),
            kind.label()
        );
        return ExitCode::from(2);
    }
    if common.dump_config {
        print!("{}", config.to_toml());
        return ExitCode::SUCCESS;
    }

    let mut opts = RunOptions::default();
    if let Some(jobs) = common.jobs {
        opts.jobs = jobs.max(1);
    }
    opts.out_dir = common.out.clone();

    match run(&config, &opts) {
        Ok(outcome) => {
            for line in &outcome.summary {
                println!("{line}");
            }
            println!("results: {}", outcome.results_path.display());
            println!("report:  {}", outcome.report_path.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
