//! Scenario runner behind the `qqm` binary: declarative scenario files in,
//! CSV tables and exit codes out.

pub mod report;
pub mod runner;
pub mod scenario;

pub use report::{Cmp, SummaryRow};
pub use runner::{execute, Options, Outcome};
pub use scenario::Scenario;

/// Failure modes with their process exit codes.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Unreadable, unparsable or schema-violating scenario file (exit 2).
    #[error("parse error: {0}")]
    Parse(String),
    /// A physical constraint of the scenario is violated (exit 3); the
    /// message names the equation tag, e.g. `L6:norm`.
    #[error("constraint violation: {0}")]
    Constraint(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Constraint(_) => 3,
        }
    }
}

impl From<qqm_core::Error> for CliError {
    fn from(e: qqm_core::Error) -> Self {
        use qqm_core::Error as E;
        match &e {
            E::ConstraintViolated { .. }
            | E::EvanescentRegime { .. }
            | E::NoPropagation
            | E::NonUnitPhase { .. } => CliError::Constraint(e.to_string()),
            _ => CliError::Parse(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Parse(format!("i/o: {e}"))
    }
}
