//! Command-line front end for common-cause failure rate bounds.
//!
//! Thin orchestration over `ccf-core`: a strict JSON configuration schema,
//! a machine-readable report document, two built-in case studies, and text
//! rendering. The binary in `main.rs` only parses arguments and maps
//! [`pipeline::CliError`] values to process exit codes.

pub mod config;
pub mod fixtures;
pub mod pipeline;
pub mod render;
pub mod report;
