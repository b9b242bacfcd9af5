use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use robin_cli::config::Overrides;
use robin_cli::error::CliError;

/// Robin spectra, trial-function searches and degree checks from a JSON config.
#[derive(Debug, Parser)]
#[command(name = "robin3", version)]
struct Args {
    /// Experiment config (JSON).
    config: PathBuf,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory; overrides `output_path`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
    /// Append β in (1, 6] to the grid. These rows are labeled outside the
    /// theorem range and do not affect the exit code.
    #[arg(long)]
    extended_beta: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    if let Some(jobs) = args.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let overrides = Overrides { seed: args.seed, out: args.out, extended_beta: args.extended_beta };
    match robin_cli::run_file(&args.config, &overrides) {
        Ok(status) => {
            if status != robin_cli::commands::Status::Passed {
                eprintln!("run finished with status {status:?}");
            }
            ExitCode::from(status.exit_code() as u8)
        }
        Err(e) => report(e),
    }
}

fn report(e: CliError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}
