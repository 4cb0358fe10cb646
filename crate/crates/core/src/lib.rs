//! Exact entanglement-entropy bounds for stabilizer quantum memories.
//!
//! The stabilizer engine computes subregion entropies of maximally mixed code
//! states by GF(2) rank, and checks them against the local-indistinguishability
//! condition, the telescoped strong-subadditivity bound on the code dimension,
//! topological entanglement entropy, and code tradeoffs. A dense-matrix
//! backend recomputes the same quantities for small systems.

pub mod dense;
pub mod entropy;
pub mod error;
pub mod f2;
pub mod geometry;
pub mod models;
pub mod pauli;
pub mod selfcheck;

pub use entropy::{
    BoundVerdict, EntropyReport, EntropySample, FitForm, ScalingFit, TradeoffReport,
};
pub use error::{Error, Result};
pub use f2::{BitMatrix, BitVector};
pub use geometry::{MedWidths, PartitionSequence, Placement, Region, TorusLattice, Tripartition};
pub use models::{Model, ModelSpec};
pub use pauli::{CodeParameters, PauliOperator, StabilizerGroup};

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
