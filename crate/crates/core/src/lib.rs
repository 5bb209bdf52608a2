//! Exact minimum vertex cover for sparse graphs.
//!
//! Reductions shrink the input to a kernel, local search primes an upper
//! bound, and branch-and-reduce or a clique search on the complement proves
//! optimality. [`portfolio::solve`] runs the whole schedule.

pub mod bench;
pub mod bnr;
pub mod budget;
pub mod clique;
pub mod error;
pub mod graph;
pub mod ils;
pub mod io;
pub mod kernel;
pub mod portfolio;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{Graph, Vertex};
