//! Config ingestion, deterministic artifact output and the command layer.

pub mod commands;
pub mod config;
pub mod report;
