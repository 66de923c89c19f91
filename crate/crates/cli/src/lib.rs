//! Library side of the `ncycle` command: job parsing and execution.

pub mod job;
pub mod run;

pub use job::{Command, Format, JobSpec};
pub use run::{run, CliError, Status};
