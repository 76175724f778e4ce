//! Batch front end for `commenhance`: statistics, detections, enhancement
//! runs with JSON reports and CSV traces, and multi-run benchmarks.

pub mod bench;
pub mod commands;
pub mod dataset;
pub mod error;
pub mod external;
pub mod plan;
pub mod report;

pub use commands::{run, Cli};
pub use error::{CliError, Result};
