//! Benchmark harness and command implementations for `hdr-core`.
//!
//! The `hdr` binary exposes four subcommands:
//!
//! - `bench` runs the Monte Carlo comparison over scenarios, sizes and measures
//! - `tune` sweeps k or eps for one measure
//! - `apply` labels two columns of an external CSV file
//! - `simulate` writes scenario draws with their true density
//!
//! All random draws come from keyed streams (see [`rng`]), so output depends
//! only on the configuration and never on the number of worker threads.

pub mod apply;
pub mod bench;
pub mod config;
pub mod csvio;
pub mod error;
pub mod rng;
pub mod simulate;
pub mod svg;
pub mod tune;

pub use error::{BenchError, Result};
