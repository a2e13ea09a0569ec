//! Topological analysis of dynamic weighted networks.
//!
//! The crate turns time series (prices, simulated samples, raw matrices) into
//! weighted graphs, prunes each graph down to the subnetwork around its most
//! central node, computes persistence diagrams of the clique filtration, and
//! compares the resulting Wasserstein-distance series of the full and pruned
//! networks.
//!
//! Modules follow the processing order:
//!
//! * [`graph`] - weighted matrices, returns, correlations and distances
//! * [`centrality`] - closeness centrality and threshold selection
//! * [`persistence`] - persistence diagrams of the clique filtration
//! * [`wasserstein`] - exact p-Wasserstein distance between diagrams
//! * [`stats`] - regression, rank correlation and series comparison
//! * [`simgen`] - seeded generators for benchmark network families
//! * [`pipeline`] - end-to-end dynamic-network analysis
//! * [`io`] - CSV and JSON interchange formats

#![deny(unsafe_code)]

pub mod centrality;
pub mod error;
pub mod graph;
pub mod io;
pub mod persistence;
pub mod pipeline;
pub mod simgen;
pub mod stats;
pub mod wasserstein;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
