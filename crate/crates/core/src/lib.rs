//! Optimization core for green-commodity import supply chains.
//!
//! Two coupled models live here. The well-to-border model sizes renewable
//! production plants per exporting site with a linear program, sorts the
//! resulting unit costs into a merit order and reads border import prices
//! off it. The border-to-consumer model picks integer transport fleets and
//! flows for each consumer site by branch-and-bound.
//!
//! The crate is `no_std` and only needs an allocator, so every entry point is
//! a pure function of its inputs. File formats, the command-line runner and
//! parallel dispatch live in the `h2chain` companion crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod consumer;
pub mod error;
pub mod lp;
pub mod model;
pub mod transport;
pub mod well_to_border;

mod math;

pub use error::{ModelError, Result};
