//! Batch front end: run descriptions and the subcommands built on them.

pub mod commands;
pub mod spec;
