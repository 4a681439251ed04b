//! The decomposition map on partition chains, the pairing maps `m_{p,q}`
//! between cobar colevels, box-product colevels, the monoid verification
//! sweep, cochain composition, and the induced operad on the cohomology of
//! the partition complexes.

pub mod boxlevel;
pub mod cochain;
pub mod lie;
pub mod mpq;
pub mod psi;

pub use boxlevel::{box_factorization, box_level, BoxLevel};
pub use cochain::{coboundary, cochain_compose, leibniz_residual, Cochain};
pub use lie::{homology_operad, lie_verify, CohomologyOperad};
pub use mpq::{equivariance_report, m_pq, verify_monoid, PairingMap};
pub use psi::{psi_map, PsiTable};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PairingError {
    #[error("poset error: {0}")]
    Poset(#[from] crate::poset::PosetError),
    #[error("symmetric sequence error: {0}")]
    SymSeq(#[from] crate::symseq::SymSeqError),
    #[error("homology error: {0}")]
    Homology(#[from] crate::homology::HomologyError),
    #[error("cobar error: {0}")]
    Cobar(#[from] crate::cobar::CobarError),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("{0}")]
    Invalid(String),
}
