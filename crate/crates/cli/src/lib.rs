//! Command logic for the `hermgrass` binary: closed-form parameters, generator files,
//! distance certificates, verification suites and parameter tables.

pub mod commands;
pub mod report;
pub mod verify;

pub use commands::{run, Budgets, CliError, Command, Method, Outcome, RunConfig};
pub use report::{Format, Report};
pub use verify::Suite;
