//! Command-line front end for the poled atom–cavity simulator.
//!
//! Each subcommand produces one self-describing artifact: a `#`-prefixed
//! JSON metadata line followed by CSV rows (or, for `phasematch --format
//! json`, a single JSON line). The metadata carries every parameter needed
//! to recompute the file, which is exactly what `--validate` does: it
//! re-reads an artifact, recomputes it from its own header, and demands a
//! byte-identical result. Identical configurations therefore always produce
//! byte-identical files, regardless of worker-thread count.

pub mod artifact;
pub mod config;
pub mod error;
pub mod io;
pub mod plot;
pub mod run;

pub use error::CliError;
