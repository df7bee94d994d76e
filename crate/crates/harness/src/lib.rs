//! File formats, experiment configuration and reports around
//! `clique-core`, plus the `clique` command-line tool.

pub mod commands;
pub mod config;
pub mod edge_list;
pub mod error;
pub mod report;
pub mod run;

pub use error::{HarnessError, Result};
