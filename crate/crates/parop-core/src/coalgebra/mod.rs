//! Diagonal coalgebras of pointed simplicial sets over a field, the
//! truncated coalgebra cosimplicial object, the module pairing over the
//! cobar object, the primitives equalizer and truncated derived primitives.
//!
//! All module presentations are integer matrices; the field only enters
//! through which signed orbits survive (characteristic two keeps them all)
//! and through ranks and equality tests (reduction mod `p`).

pub mod cy;
pub mod module;
pub mod primitives;
pub mod space;

pub use cy::{build_cy, CyOptions, TruncatedCY};
pub use module::{mu_pq, verify_module, MuMap};
pub use primitives::{primitives_equalizer, truncated_primitives, GradedRanks};
pub use space::DiagonalCoalgebra;

use crate::homology::{rank, rank_mod_p, IntMatrix};
use crate::poset::Perm;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoalgebraError {
    #[error("poset error: {0}")]
    Poset(#[from] crate::poset::PosetError),
    #[error("homology error: {0}")]
    Homology(#[from] crate::homology::HomologyError),
    #[error("cobar error: {0}")]
    Cobar(#[from] crate::cobar::CobarError),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("cosimplicial identity violated in the coalgebra object: {0}")]
    Identity(String),
    #[error("{0}")]
    Invalid(String),
}

/// The coefficient field: the rationals or a prime field. Chain-level data
/// stays integral; the field governs orbit survival and ranks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Field {
    Q,
    Fp(u64),
}

impl Field {
    pub fn parse(text: &str) -> Result<Self, CoalgebraError> {
        if text == "q" || text == "Q" {
            return Ok(Field::Q);
        }
        if let Some(p) = text.strip_prefix("fp:") {
            let p: u64 = p
                .parse()
                .map_err(|_| CoalgebraError::Invalid(format!("bad field spec {text:?}")))?;
            return Field::prime(p);
        }
        Err(CoalgebraError::Invalid(format!("bad field spec {text:?} (use q or fp:P)")))
    }

    pub fn prime(p: u64) -> Result<Self, CoalgebraError> {
        if p < 2 || (2..p).take_while(|d| d * d <= p).any(|d| p % d == 0) {
            return Err(CoalgebraError::NotPrime(p));
        }
        Ok(Field::Fp(p))
    }

    pub fn characteristic_two(&self) -> bool {
        matches!(self, Field::Fp(2))
    }

    pub fn rank(&self, m: &IntMatrix) -> usize {
        match self {
            Field::Q => rank(m),
            Field::Fp(p) => rank_mod_p(m, *p),
        }
    }

    /// Equality of integer matrices as maps over this field.
    pub fn equal(&self, a: &IntMatrix, b: &IntMatrix) -> bool {
        match self {
            Field::Q => a == b,
            Field::Fp(p) => {
                if a.nrows() != b.nrows() || a.ncols() != b.ncols() {
                    return false;
                }
                for r in 0..a.nrows() {
                    let mut diff = std::collections::BTreeMap::new();
                    for (c, v) in a.row(r) {
                        *diff.entry(c).or_insert(0i64) += v;
                    }
                    for (c, v) in b.row(r) {
                        *diff.entry(c).or_insert(0i64) -= v;
                    }
                    if diff.values().any(|v| v.rem_euclid(*p as i64) != 0) {
                        return false;
                    }
                }
                true
            }
        }
    }

    pub fn is_zero_matrix(&self, a: &IntMatrix) -> bool {
        self.equal(a, &IntMatrix::zero(a.nrows(), a.ncols()))
    }
}

/// Koszul sign of permuting homogeneous tensor factors: the product of
/// `(-1)^{d_i d_j}` over the inversions of `sigma`.
pub fn koszul_sign(sigma: &Perm, degrees: &[usize]) -> i64 {
    let n = degrees.len();
    let mut sign = 1i64;
    for i in 0..n {
        for j in i + 1..n {
            if sigma.apply(i as u32 + 1) > sigma.apply(j as u32 + 1)
                && degrees[i] % 2 == 1
                && degrees[j] % 2 == 1
            {
                sign = -sign;
            }
        }
    }
    sign
}

/// Apply `sigma` to tensor factor positions (`new[σ(i)] = old[i]`) with the
/// Koszul sign.
pub fn act_tuple<T: Clone + Default>(
    sigma: &Perm,
    tuple: &[T],
    degrees: &[usize],
) -> (Vec<T>, i64) {
    let mut out = vec![T::default(); tuple.len()];
    for (i, item) in tuple.iter().enumerate() {
        out[sigma.apply(i as u32 + 1) as usize - 1] = item.clone();
    }
    (out, koszul_sign(sigma, degrees))
}
