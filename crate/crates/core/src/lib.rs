//! Fast block probabilistic model (FBM) for missing-link prediction.
//!
//! The model repeatedly partitions an undirected graph into dense blocks
//! (communities found by minimum-degree peeling inside a random bipartition)
//! and sparse leftovers, then scores every unlinked node pair by a
//! Beta-integral estimate averaged over the sampled partitions.
//!
//! ```
//! use fbm_core::{datasets, estimator};
//!
//! let ring = datasets::ring_of_six();
//! let scores: fbm_core::Scores = estimator::predict(&ring, 1.0, 200, 7).unwrap();
//! assert_eq!(scores.len(), 9);
//! ```
//!
//! Numerical code is generic over [`Real`] (`f32` or `f64`); the aliases at
//! the crate root fix the scalar to `f64` for everyday use.

pub mod baselines;
pub mod datasets;
pub mod error;
pub mod estimator;
pub mod evaluation;
pub mod graph;
pub mod partition;
pub mod real;
pub mod seed;
pub mod special;
pub mod stats;

pub use error::{Error, Result};
pub use graph::{Graph, NodeId};
pub use partition::{Block, BlockKind, Partition};
pub use real::Real;

/// Link scores in double precision.
pub type Scores = estimator::ScoreTable<f64>;
/// Link scores in single precision.
pub type Scores32 = estimator::ScoreTable<f32>;
/// Cross-sample accumulator in double precision.
pub type Accumulator = estimator::PairAccumulator<f64>;
/// Per-sample Beta-integral terms in double precision.
pub type Terms = estimator::PairTerms<f64>;
/// Topology summary in double precision.
pub type Stats = stats::GraphStats<f64>;
/// Block link-density matrix in double precision.
pub type DensityMatrix = partition::DensityMatrix<f64>;
