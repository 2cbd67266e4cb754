use gradhom_core::flow::FlowError;
use gradhom_core::homotopy::HomotopyError;
use gradhom_core::invariants::InvariantError;
use gradhom_core::reduction::ReductionError;
use serde_json::json;
use thiserror::Error;

use crate::spec::SpecError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("{0}")]
    Usage(String),
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("numerical failure: {0}")]
    Numeric(String),
    #[error("{0}")]
    OutOfTheory(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Spec(_) | CliError::Usage(_) | CliError::Write { .. } => 2,
            CliError::Numeric(_) => 3,
            CliError::OutOfTheory(_) => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Spec(_) => "parse",
            CliError::Usage(_) => "usage",
            CliError::Write { .. } => "io",
            CliError::Numeric(_) => "numeric",
            CliError::OutOfTheory(_) => "out_of_theory",
        }
    }

    pub fn to_json(&self) -> String {
        let v = json!({ "error": { "kind": self.kind(), "message": self.to_string(), "exit_code": self.exit_code() } });
        serde_json::to_string(&v).expect("error json")
    }
}

impl From<FlowError> for CliError {
    fn from(e: FlowError) -> Self {
        CliError::Numeric(e.to_string())
    }
}

impl From<InvariantError> for CliError {
    fn from(e: InvariantError) -> Self {
        CliError::Numeric(e.to_string())
    }
}

impl From<HomotopyError> for CliError {
    fn from(e: HomotopyError) -> Self {
        CliError::Numeric(e.to_string())
    }
}

impl From<ReductionError> for CliError {
    fn from(e: ReductionError) -> Self {
        match e {
            ReductionError::NotProper => CliError::OutOfTheory(e.to_string()),
            other => CliError::Numeric(other.to_string()),
        }
    }
}
