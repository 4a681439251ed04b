//! Set partitions of `{1..n}`, the pointed simplicial sets `P(n)` of
//! partition chains, symmetric group actions, profiles, and the
//! grafting/ungrafting combinatorics underlying the decomposition map.

mod chain;
mod graft;
mod partition;
mod perm;
mod profile;

pub use chain::{simplices, PChain, SimplexTable};
pub use graft::{block_translation, graft, ungraft};
pub use partition::{
    bell_number, enumerate_partitions, enumerate_partitions_with_cap, refines, Partition,
    DEFAULT_PARTITION_CAP, DEFAULT_SIMPLEX_CAP,
};
pub use perm::Perm;
pub use profile::{profile_of, Profile};

use thiserror::Error;

/// Errors from partition/chain constructors and operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosetError {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("ground sets differ: {0} vs {1}")]
    GroundMismatch(usize, usize),
    #[error("enumeration cap exceeded: n = {n} > cap = {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("index {index} out of range for level {level}")]
    IndexOutOfRange { index: usize, level: usize },
    #[error("not a permutation of 1..={0}")]
    NotAPermutation(usize),
    #[error("operation undefined at the basepoint")]
    Basepoint,
    #[error("chain entries are not weakly increasing under refinement")]
    NotAChain,
    #[error("level mismatch: {0}")]
    LevelMismatch(String),
    #[error("arity mismatch: {0}")]
    ArityMismatch(String),
}
