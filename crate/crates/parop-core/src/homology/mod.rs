//! Finite pointed simplicial sets, integer chain complexes of normalized
//! chains, Smith normal form and exact (co)homology.

pub mod complex;
pub mod matrix;
pub mod simplicial;

pub use complex::{
    cohomology, homology, normalized_chain_complex, ChainComplex, Coefficients,
    GradedAbelianGroup,
};
pub use matrix::{
    kernel_basis, rank, rank_mod_p, right_inverse, smith_normal_form, IntMatrix, Snf,
};
pub use simplicial::{par_complex, sphere, Cell, PointedSimplicialSet};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("simplicial identity violated: {0}")]
    SimplicialIdentity(String),
    #[error("malformed simplicial set: {0}")]
    Malformed(String),
    #[error("SNF certificate check failed")]
    CertificateCheck,
    #[error("boundary does not square to zero in degree {0}")]
    BoundarySquare(usize),
    #[error("torsion coefficient does not fit in u64")]
    TorsionOverflow,
    #[error("poset error: {0}")]
    Poset(#[from] crate::poset::PosetError),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
