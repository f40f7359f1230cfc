//! Gibbs ensembles of degree-bounded random trees.
//!
//! Two ensembles are supported: labeled trees on `1..=N` with vertex degree at
//! most `D`, and plane trees with at most `D` children per vertex. Each vertex
//! of class `k` contributes energy `c(k)`, and trees are weighted by
//! `e^{−βH(T)}`. The crate computes partition functions and profile laws
//! exactly, samples trees exactly, and evaluates the large-deviation rate
//! function of the class frequencies together with its minimizer.

pub mod cli;
pub mod combinatorics;
pub mod ensembles;
pub mod error;
pub mod gof;
pub mod lattice;
pub mod ldp;
pub mod partition;
pub mod rate;
pub mod rng;
pub mod treegen;

pub use ensembles::{CountVector, EnsembleSpec, FrequencyVector, TreeKind};
pub use error::{Error, Result};
