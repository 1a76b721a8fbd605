//! Shortest-path-index (SPI) and generalized shortest-path-index (GSPI)
//! graph kernels.
//!
//! The SPI vector of a graph counts node pairs by shortest-path distance;
//! the GSPI vector additionally keys each pair by how many shortest paths
//! connect it. Both kernels are inner products of these vectors. The crate
//! also carries the random graph models used to compare them (Erdős–Rényi
//! against a balanced two-block planted partition), a Pegasos linear SVM
//! with stratified cross-validation, and closed-form predictions of the
//! feature distributions.

// negated comparisons also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiment;
pub mod features;
pub mod graph;
pub mod kernels;
pub mod learn;
pub mod rng;
pub mod theory;

pub use error::{Error, Result};
pub use features::{BinningScheme, FeatureKey, GspiVector, SpiVector, UnitVector};
pub use graph::{Graph, GraphLabel, ModelParams};

#[cfg(test)]
extern crate self as gspi_core;

#[cfg(test)]
#[path = "../tests/common/mod.rs"]
mod testing;
