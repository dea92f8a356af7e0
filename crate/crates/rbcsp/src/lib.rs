//! A laboratory for random constraint satisfaction.
//!
//! The crate generates Model RB / Model RD instances, analyzes their
//! constraint hypergraphs (degrees, width by min-degree peeling, cores,
//! linkage), runs greedy backtrack-free and chronological backtracking
//! searches, checks variable-centered consistency certificates, and drives
//! Monte Carlo sweeps that locate the satisfiability and backtrack-freeness
//! phase transitions empirically.
//!
//! Everything is deterministic: all randomness flows from explicit 64-bit
//! seeds through derived substreams, so instances, searches, and whole sweep
//! tables are pure functions of their parameters.

pub mod consistency;
pub mod error;
pub mod experiments;
pub mod hypergraph;
pub mod model;
pub mod plot;
pub mod rng;
pub mod search;

pub use error::{Error, Result};

/// Artifact version recorded in result records and sweep metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
