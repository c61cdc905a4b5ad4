//! Batch front-end: configuration, command dispatch, CSV/SVG output.

pub mod args;
pub mod config;
pub mod error;
pub mod output;
pub mod presets;
pub mod run;

pub use config::{load_config, Command, RunConfig};
pub use error::CliError;
pub use presets::FigureId;
pub use run::{run, RunOutcome};
