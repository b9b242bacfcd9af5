use std::path::PathBuf;

use robin_core::robinsolver::{build_domain, DomainSpec, SolverConfig};
use robin_core::C64;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Points of the default β grid on `[-1, 1]`.
pub const DEFAULT_GRID_POINTS: usize = 21;
/// Upper end of the `--extended-beta` grid.
pub const EXTENDED_BETA_MAX: f64 = 6.0;
/// Radial samples per profile in `profile.csv`.
pub const PROFILE_POINTS: usize = 400;
pub const PROFILE_BETAS: [f64; 5] = [-1.0, -0.5, 0.0, 0.5, 1.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandName {
    DiskSpectrum,
    DomainSpectrum,
    FindTrial,
    VerifyBound,
    DegreeCheck,
    Sweep,
}

impl CommandName {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::DiskSpectrum => "disk-spectrum",
            Self::DomainSpectrum => "domain-spectrum",
            Self::FindTrial => "find-trial",
            Self::VerifyBound => "verify-bound",
            Self::DegreeCheck => "degree-check",
            Self::Sweep => "sweep",
        }
    }

    fn needs_domains(self) -> bool {
        matches!(self, Self::DomainSpectrum | Self::FindTrial | Self::VerifyBound | Self::Sweep)
    }
}

/// One domain `Φ(z) = z + c_2 z^2 + ...`, with optional per-domain basis sizes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainEntry {
    #[serde(default)]
    pub name: Option<String>,
    /// `[[re, im], ...]` starting at `c_2`.
    #[serde(default)]
    pub coeffs: Vec<[f64; 2]>,
    #[serde(rename = "N", default)]
    pub radial_degree: Option<usize>,
    #[serde(rename = "M", default)]
    pub angular_order: Option<usize>,
}

impl DomainEntry {
    pub fn label(&self, index: usize) -> String {
        self.name.clone().unwrap_or_else(|| format!("domain{index}"))
    }

    pub fn spec(&self) -> robin_core::Result<DomainSpec> {
        build_domain(&self.coeffs.iter().map(|&[re, im]| C64::new(re, im)).collect::<Vec<_>>())
    }
}

/// `Φ(z) = z + c z^power` for each `c` in `values`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Family {
    pub name: String,
    pub power: usize,
    pub values: Vec<f64>,
}

impl Family {
    pub fn domains(&self) -> Vec<DomainEntry> {
        self.values
            .iter()
            .map(|&c| {
                let mut coeffs = vec![[0.0, 0.0]; self.power - 1];
                coeffs[self.power - 2] = [c, 0.0];
                DomainEntry { name: Some(format!("{}(c={c})", self.name)), coeffs, radial_degree: None, angular_order: None }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverSection {
    #[serde(rename = "N")]
    pub radial_degree: usize,
    #[serde(rename = "M")]
    pub angular_order: usize,
    pub n_r: Option<usize>,
    pub n_theta: Option<usize>,
}

impl Default for SolverSection {
    fn default() -> Self {
        Self { radial_degree: 24, angular_order: 8, n_r: None, n_theta: None }
    }
}

impl SolverSection {
    pub fn for_domain(&self, entry: &DomainEntry, alpha: f64) -> SolverConfig {
        SolverConfig {
            alpha,
            radial_degree: entry.radial_degree.unwrap_or(self.radial_degree),
            angular_order: entry.angular_order.unwrap_or(self.angular_order),
            n_r: self.n_r,
            n_theta: self.n_theta,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DegreeSection {
    pub maps: Vec<String>,
    pub level: u32,
    pub amplitude: f64,
    pub flips: usize,
    /// Refinement level of the trial-field certificate; none skips it.
    pub certificate_level: Option<u32>,
}

impl Default for DegreeSection {
    fn default() -> Self {
        Self {
            maps: ["identity", "constant", "reflection", "antipodal", "refsym-synthetic"].map(String::from).to_vec(),
            level: 3,
            amplitude: 0.45,
            flips: 1,
            certificate_level: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: CommandName,
    #[serde(default)]
    pub beta_grid: Option<Vec<f64>>,
    #[serde(default)]
    pub domains: Vec<DomainEntry>,
    #[serde(default)]
    pub family: Option<Family>,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub degree: DegreeSection,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output")]
    pub output_path: PathBuf,
}

fn default_output() -> PathBuf {
    PathBuf::from("out")
}

/// Flags that override the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub extended_beta: bool,
}

/// A validated configuration with the β grid and domain list expanded.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub config: ExperimentConfig,
    pub betas: Vec<f64>,
    pub domains: Vec<(String, DomainEntry, DomainSpec)>,
    pub extended_beta: bool,
}

pub fn uniform_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

/// Whether `beta` lies in the range where the bound is asserted.
pub fn in_theorem_range(beta: f64) -> bool {
    (-1.0..=1.0).contains(&beta)
}

impl Experiment {
    pub fn from_json(text: &str, overrides: &Overrides) -> Result<Self, CliError> {
        let config: ExperimentConfig = serde_json::from_str(text).map_err(|e| CliError::Config(format!("cannot parse config: {e}")))?;
        Self::new(config, overrides)
    }

    pub fn new(mut config: ExperimentConfig, overrides: &Overrides) -> Result<Self, CliError> {
        if let Some(seed) = overrides.seed {
            config.seed = seed;
        }
        if let Some(out) = &overrides.out {
            config.output_path = out.clone();
        }
        let mut betas = config.beta_grid.clone().unwrap_or_else(|| uniform_grid(-1.0, 1.0, DEFAULT_GRID_POINTS));
        if betas.is_empty() {
            return Err(CliError::Config("beta_grid is empty".into()));
        }
        if let Some(&b) = betas.iter().find(|b| !in_theorem_range(**b)) {
            return Err(CliError::Config(format!("beta {b} outside [-1, 1]; use --extended-beta for exploratory values above 1")));
        }
        if overrides.extended_beta {
            let step = 0.1;
            let extra = ((EXTENDED_BETA_MAX - 1.0) / step).round() as usize;
            betas.extend((1..=extra).map(|i| 1.0 + step * i as f64));
        }

        let mut entries = config.domains.clone();
        if let Some(family) = &config.family {
            if family.power < 2 {
                return Err(CliError::Config(format!("family power {} must be at least 2", family.power)));
            }
            entries.extend(family.domains());
        }
        if config.command.needs_domains() && entries.is_empty() {
            return Err(CliError::Config(format!("{} needs at least one domain", config.command.as_str())));
        }
        let mut domains = Vec::with_capacity(entries.len());
        for (i, entry) in entries.into_iter().enumerate() {
            let spec = entry.spec().map_err(|e| CliError::Config(format!("domain {}: {e}", entry.label(i))))?;
            domains.push((entry.label(i), entry, spec));
        }
        if config.degree.level >= robin_core::degree::MAX_LEVEL {
            return Err(CliError::Config(format!("degree level must be below {}", robin_core::degree::MAX_LEVEL)));
        }
        Ok(Self { config, betas, domains, extended_beta: overrides.extended_beta })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Experiment, CliError> {
        Experiment::from_json(text, &Overrides::default())
    }

    #[test]
    fn default_grid_has_21_points_on_the_unit_interval() {
        let e = parse(r#"{"command": "disk-spectrum"}"#).unwrap();
        assert_eq!(e.betas.len(), 21);
        assert_eq!(e.betas[0], -1.0);
        assert_eq!(e.betas[20], 1.0);
        assert!((e.betas[10]).abs() < 1e-15);
    }

    #[test]
    fn out_of_range_beta_is_a_config_error() {
        assert!(matches!(parse(r#"{"command": "disk-spectrum", "beta_grid": [0.0, 1.5]}"#), Err(CliError::Config(_))));
    }

    #[test]
    fn extended_grid_reaches_six() {
        let o = Overrides { extended_beta: true, ..Overrides::default() };
        let e = Experiment::from_json(r#"{"command": "disk-spectrum", "beta_grid": [0.0]}"#, &o).unwrap();
        assert_eq!(e.betas.len(), 51);
        assert!((e.betas.last().unwrap() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn domain_commands_need_domains() {
        assert!(parse(r#"{"command": "verify-bound"}"#).is_err());
        let e = parse(r#"{"command": "verify-bound", "domains": [{"coeffs": [[0.2, 0.0]]}]}"#).unwrap();
        assert_eq!(e.domains[0].0, "domain0");
        assert!((e.domains[0].2.area - std::f64::consts::PI * 1.08).abs() < 1e-12);
    }

    #[test]
    fn non_univalent_domain_is_rejected() {
        assert!(parse(r#"{"command": "verify-bound", "domains": [{"coeffs": [[0.6, 0.0]]}]}"#).is_err());
    }

    #[test]
    fn family_expands_to_monomial_perturbations() {
        let e = parse(r#"{"command": "sweep", "family": {"name": "peanut", "power": 3, "values": [0.05, 0.1]}}"#).unwrap();
        assert_eq!(e.domains.len(), 2);
        assert_eq!(e.domains[1].1.coeffs, vec![[0.0, 0.0], [0.1, 0.0]]);
        assert_eq!(e.domains[1].0, "peanut(c=0.1)");
    }

    #[test]
    fn flags_override_the_file() {
        let o = Overrides { seed: Some(9), out: Some("elsewhere".into()), extended_beta: false };
        let e = Experiment::from_json(r#"{"command": "degree-check", "seed": 1}"#, &o).unwrap();
        assert_eq!(e.config.seed, 9);
        assert_eq!(e.config.output_path, PathBuf::from("elsewhere"));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(parse(r#"{"command": "sweep", "betagrid": [0.0]}"#).is_err());
    }
}
