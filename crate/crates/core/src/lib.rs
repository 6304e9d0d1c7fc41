//! Search for modular structure in weighted networks by maximizing the
//! multilinear extension of additive partition functions over fuzzy
//! clusterings.
//!
//! The building blocks are:
//!
//! * [`graph`]: weighted graphs and benchmark generators,
//! * [`scores`]: cluster-score set functions (modularity, dual weights,
//!   common neighbors, triangles) held as Möbius coefficients,
//! * [`mle`]: fuzzy covers and the multilinear objective with its derivatives,
//! * [`search`]: greedy merging, greedy clustering and an exhaustive oracle,
//! * [`overlap`]: multi-run families of overlapping modules,
//! * [`io`]: the text formats read and written by the command-line tool.

pub mod error;
pub mod graph;
pub mod io;
pub mod mle;
pub mod mobius;
pub mod nodeset;
pub mod overlap;
pub mod partition;
pub mod scores;
pub mod search;

pub use error::{Error, Result};
pub use graph::WeightedGraph;
pub use mle::{FuzzyCover, MembershipDistribution};
pub use nodeset::NodeSet;
pub use partition::Partition;
pub use scores::{ClusterScore, ScoreKind};

/// Absolute tolerance for comparing scores, ties and unit masses.
pub const TOL: f64 = 1e-9;
