//! Batch driver and file formats around `gablab-core`: JSON experiment
//! specs, deterministic JSON reports, CSV sweeps, and subgroup listings.
//!
//! The CLI binary (`gablab`) wires these together; everything here is also
//! usable as a library.

pub mod jsonio;
pub mod report;
pub mod runner;
pub mod schema;

pub use gablab_core as core;
