//! Batch driver: reads an experiment config, runs one named command and
//! writes CSV tables with JSON sidecars.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::path::Path;

use serde_json::json;

use commands::{CommandRegistry, Status};
use config::{Experiment, Overrides};
use error::CliError;

/// Runs the experiment described by the config file at `path`.
pub fn run_file(path: &Path, overrides: &Overrides) -> Result<Status, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let experiment = Experiment::from_json(&text, overrides)?;
    run(&experiment)
}

pub fn run(experiment: &Experiment) -> Result<Status, CliError> {
    let registry = CommandRegistry::standard();
    let command = registry.get(experiment.config.command.as_str())?;
    let start = std::time::Instant::now();
    let output = command.run(experiment)?;
    let meta = json!({
        "command": command.name(),
        "config": experiment.config,
        "betas": experiment.betas,
        "extended_beta": experiment.extended_beta,
        "status": format!("{:?}", output.status),
        "total_runtime_seconds": start.elapsed().as_secs_f64(),
    });
    output::write_tables(&experiment.config.output_path, &output.tables, &meta)?;
    Ok(output.status)
}
