//! Exact-arithmetic kernels for partition poset complexes and the algebraic
//! structures layered on top of them.
//!
//! The crate is organized around the pointed simplicial sets `P(n)` whose
//! simplices are chains of set partitions of `{1..n}`:
//!
//! * [`poset`] — set partitions, the chains of `P(n)`, symmetric group
//!   actions, profiles, and the grafting/ungrafting combinatorics.
//! * [`homology`] — generic finite pointed simplicial sets, integer chain
//!   complexes, Smith normal form and exact (co)homology.
//! * [`symseq`] — reduced symmetric sequences presented by pointed indexing
//!   sets, with the composition product and its dual.
//! * [`cobar`] — the cosimplicial module built from the one-point symmetric
//!   sequence, its conormalized total complex and totalization cohomology.
//! * [`pairing`] — the decomposition map on chains, the pairing maps
//!   `m_{p,q}`, box-product colevels, monoid verification, cochain
//!   composition and the induced operad on cohomology.
//! * [`coalgebra`] — diagonal coalgebras of pointed simplicial sets over a
//!   field, the truncated coalgebra cosimplicial object, the module pairing
//!   `mu_{p,q}`, and truncated derived primitives.
//!
//! All values are immutable after construction and all operations are pure;
//! every check is exact (integer or prime-field arithmetic, never floats).

pub mod cobar;
pub mod coalgebra;
pub mod homology;
pub mod pairing;
pub mod poset;
pub mod report;
pub mod symseq;

pub use report::{Report, Violation};
