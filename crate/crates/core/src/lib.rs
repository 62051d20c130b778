//! Exact power-graph statistics of finite groups.
//!
//! Groups are built from a small family of constructors or read from
//! Cayley tables. Every edge count of the directed and undirected power
//! graph is a function of the element-order spectrum, so large groups are
//! handled through spectra alone while small ones can be checked against
//! explicitly built graphs.

pub mod arith;
pub mod catalog;
pub mod census;
pub mod cli;
pub mod config;
pub mod constructors;
pub mod error;
pub mod group;
pub mod groupspec;
pub mod powergraph;
pub mod report;
pub mod spectrum;

pub use catalog::{catalog, p_group_catalog, CensusDir, Completeness};
pub use error::{Error, Result};
pub use group::{ElementIndex, GroupTable};
pub use groupspec::GroupSpec;
pub use report::{Verdict, VerificationReport};
pub use spectrum::{group_stats, order_spectrum, GroupStats, OrderSpectrum};
