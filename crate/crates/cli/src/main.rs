use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use clusternet_cli::config::Experiment;
use clusternet_cli::Options;

/// Interference, outage and capacity experiments on clustered wireless
/// networks.
#[derive(Debug, Parser)]
#[command(name = "clusternet", version)]
struct Args {
    experiment: Experiment,
    /// Experiment file (TOML, or the JSON sidecar of an earlier run).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the seed of the file.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the resolved configuration without running.
    #[arg(long)]
    check: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let opts = Options {
        config: args.config,
        seed: args.seed,
        out: args.out,
        check: args.check,
    };
    match clusternet_cli::run(args.experiment, &opts) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("clusternet: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
