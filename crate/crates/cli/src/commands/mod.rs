//! Named commands behind one trait, looked up by the `command` field.

mod degree;
mod disk;
mod domain;

use std::collections::BTreeMap;

use crate::config::Experiment;
use crate::error::CliError;
use crate::output::Table;

pub use degree::{expected_degree, DegreeCheck, DegreeRecord};
pub use disk::{DiskRecord, DiskSpectrum};
pub use domain::{evaluate_row, DomainCommand, DomainRecord, Stages};

/// How a run ended, apart from config errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Passed,
    /// An asserted inequality or criterion failed in some row.
    Failed,
    /// A solver or search error was recorded in some row.
    Errored,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Passed => 0,
            Status::Failed | Status::Errored => 2,
        }
    }

    fn of_rows(rows: impl IntoIterator<Item = (bool, bool)>) -> Self {
        let mut status = Status::Passed;
        for (errored, passed) in rows {
            if errored {
                return Status::Errored;
            }
            if !passed {
                status = Status::Failed;
            }
        }
        status
    }
}

pub struct RunOutput {
    pub tables: Vec<Table>,
    pub status: Status,
}

pub trait Command: Send + Sync {
    fn name(&self) -> &'static str;
    fn run(&self, experiment: &Experiment) -> Result<RunOutput, CliError>;
}

pub struct CommandRegistry {
    commands: BTreeMap<&'static str, Box<dyn Command>>,
}

impl CommandRegistry {
    pub fn standard() -> Self {
        let mut r = Self { commands: BTreeMap::new() };
        r.register(Box::new(DiskSpectrum));
        r.register(Box::new(DomainCommand::new("domain-spectrum", Stages { bound: false, trial: false })));
        r.register(Box::new(DomainCommand::new("verify-bound", Stages { bound: true, trial: false })));
        r.register(Box::new(DomainCommand::new("find-trial", Stages { bound: false, trial: true })));
        r.register(Box::new(DomainCommand::new("sweep", Stages { bound: true, trial: true })));
        r.register(Box::new(DegreeCheck));
        r
    }

    pub fn register(&mut self, command: Box<dyn Command>) {
        self.commands.insert(command.name(), command);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.commands.keys().copied().collect()
    }

    pub fn get(&self, name: &str) -> Result<&dyn Command, CliError> {
        self.commands.get(name).map(|c| c.as_ref()).ok_or_else(|| CliError::Config(format!("unknown command {name:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_command_name_is_registered() {
        let r = CommandRegistry::standard();
        assert_eq!(r.names(), ["degree-check", "disk-spectrum", "domain-spectrum", "find-trial", "sweep", "verify-bound"]);
        assert!(r.get("plot").is_err());
    }

    #[test]
    fn errors_dominate_failures() {
        assert_eq!(Status::of_rows([(false, true), (false, true)]), Status::Passed);
        assert_eq!(Status::of_rows([(false, false), (false, true)]), Status::Failed);
        assert_eq!(Status::of_rows([(false, false), (true, false)]), Status::Errored);
    }
}
