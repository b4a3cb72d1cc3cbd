//! Harness around the kernelization engine: graph file formats, seeded
//! instance generators, run configuration, and the command drivers that
//! persist tables, kernels, traces, and audit reports.

pub mod commands;
pub mod config;
pub mod generate;
pub mod io;
