//! Scenario files, reports and the command-line runner around
//! [`h2chain_core`].

pub mod cli;
pub mod dataset;
pub mod report;
pub mod run;

pub use h2chain_core as core;
