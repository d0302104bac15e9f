//! Config ingestion, preset scenarios and CSV time-series output for
//! `cqed-core`.

pub mod config;
pub mod error;
pub mod presets;
pub mod quantity;
pub mod run;

pub use config::{load_config, parse_str, InitialState, Observable, Ref, RunSpec};
pub use error::CliError;
pub use run::{execute, Diagnostics, RunReport};
