//! Command-line front end for `qwalk-core`: experiment configs in, JSON
//! envelopes and CSV sidecars out.

pub mod commands;
pub mod config;
pub mod csvio;
pub mod envelope;
pub mod error;

pub use error::CliError;
