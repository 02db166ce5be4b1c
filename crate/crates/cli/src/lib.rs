//! Plumbing behind the `walshsum` binary: run configuration, commands and table output.

pub mod commands;
pub mod config;
pub mod output;
