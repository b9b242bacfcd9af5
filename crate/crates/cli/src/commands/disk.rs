use std::time::Instant;

use robin_core::diskspec::{disk_lambda2, disk_lambdas, profile_table};
use serde::Serialize;

use super::{Command, RunOutput, Status};
use crate::config::{in_theorem_range, Experiment, PROFILE_BETAS, PROFILE_POINTS};
use crate::error::CliError;
use crate::output::Table;

/// Unit-disk Robin eigenvalues at boundary coefficient `beta`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiskRecord {
    pub beta: f64,
    pub in_theorem_range: bool,
    pub lambda1: Option<f64>,
    pub lambda2: Option<f64>,
    pub lambda3: Option<f64>,
    pub lambda4: Option<f64>,
    /// Root of `x J_1'(x) + beta J_1(x)` with `lambda2 = x^2`.
    pub root: Option<f64>,
    pub pass: bool,
    pub error: Option<String>,
}

impl DiskRecord {
    pub fn compute(beta: f64) -> Self {
        let mut rec = Self { beta, in_theorem_range: in_theorem_range(beta), lambda1: None, lambda2: None, lambda3: None, lambda4: None, root: None, pass: false, error: None };
        match disk_lambdas(beta).and_then(|l| Ok((l, disk_lambda2(beta)?))) {
            Ok((l, mode)) => {
                [rec.lambda1, rec.lambda2, rec.lambda3, rec.lambda4] = l.map(Some);
                rec.root = Some(mode.x);
                rec.pass = l.iter().all(|v| v.is_finite()) && l.windows(2).all(|w| w[0] <= w[1]);
            }
            Err(e) => rec.error = Some(e.to_string()),
        }
        rec
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
struct ProfileRow {
    beta: f64,
    r: f64,
    g: f64,
}

pub struct DiskSpectrum;

impl Command for DiskSpectrum {
    fn name(&self) -> &'static str {
        "disk-spectrum"
    }

    fn run(&self, experiment: &Experiment) -> Result<RunOutput, CliError> {
        let mut records = Vec::with_capacity(experiment.betas.len());
        let mut runtimes = Vec::with_capacity(experiment.betas.len());
        for &beta in &experiment.betas {
            let start = Instant::now();
            records.push(DiskRecord::compute(beta));
            runtimes.push(start.elapsed().as_secs_f64());
        }
        let start = Instant::now();
        let profile = profile_table(&PROFILE_BETAS, PROFILE_POINTS).map_err(|e| CliError::Serialize(e.to_string()))?;
        let elapsed = start.elapsed().as_secs_f64() / profile.len() as f64;
        let profile: Vec<ProfileRow> = profile.into_iter().map(|(beta, r, g)| ProfileRow { beta, r, g }).collect();

        let status = Status::of_rows(records.iter().map(|r| (r.error.is_some(), r.pass || !r.in_theorem_range)));
        Ok(RunOutput {
            tables: vec![
                Table::new("disk-spectrum", &records, &records, &runtimes)?,
                Table::new("profile", &profile, &profile, &vec![elapsed; profile.len()])?,
            ],
            status,
        })
    }
}
