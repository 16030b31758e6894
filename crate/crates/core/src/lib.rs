//! Simulation and exact analysis of random ordered increasing k-trees.
//!
//! * [`tree`] grows trees by preferential attachment and encodes them as slot traces.
//! * [`metrics`] measures degree, clustering, descendants and root distances.
//! * [`exact`] evaluates the closed-form distributions in exact rational arithmetic.
//! * [`oracle`] provides recurrences and exhaustive enumeration as ground truth.
//! * [`asymptotics`] covers limit laws, the clustering constant and distance growth rates.
//! * [`harness`] runs Monte Carlo experiments and compares distributions.

pub mod asymptotics;
pub mod error;
pub mod exact;
pub mod harness;
pub mod metrics;
pub mod numeric;
pub mod oracle;
pub mod rng;
pub mod schedule;
pub mod table;
pub mod tree;

pub use error::{Error, Result};
pub use tree::{evolve, replay, InsertionTrace, KTree, Label};
