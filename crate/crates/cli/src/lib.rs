//! Library side of the `csn` command: the diagram file format, JSON records
//! and the subcommands themselves.

pub mod commands;
pub mod diagram;
pub mod report;
