//! Experiment orchestration for the netcontrol library: configuration parsing,
//! the sweep runner with its worker pool, CSV result tables, and grid-file
//! ingestion. The `netcontrol` binary is a thin shell over this crate.

pub mod config;
pub mod ingest;
pub mod runner;
pub mod table;
