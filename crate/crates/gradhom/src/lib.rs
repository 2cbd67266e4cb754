//! Field-spec ingestion, reports, portraits and corpus sweeps on top of
//! `gradhom-core`.

pub mod analysis;
pub mod commands;
pub mod corpus;
pub mod error;
pub mod portrait;
pub mod spec;

pub use analysis::Settings;
pub use error::CliError;
pub use spec::{FieldSpec, SpecError, TermSpec};
