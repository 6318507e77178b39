//! Command-line driver: geometry specs, the build cache, census reports and
//! manifest-driven suites.

pub mod cache;
pub mod commands;
pub mod error;
pub mod manifest;
pub mod report;
pub mod spec;

pub use commands::{run, Cli};
pub use error::{CliError, CliResult};
pub use spec::GeometrySpec;
