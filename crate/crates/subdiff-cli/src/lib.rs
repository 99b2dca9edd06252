//! Library surface of the `subdiff` command-line tool: run configuration,
//! the inline source catalog, and the command implementations.

pub mod catalog;
pub mod commands;
pub mod config;
