//! Integer chain complexes of reduced normalized chains, and (co)homology
//! via Smith normal form.

use super::matrix::{rank_mod_p, smith_normal_form, IntMatrix};
use super::simplicial::PointedSimplicialSet;
use super::HomologyError;
use serde::Serialize;

/// Coefficient choice for cohomology computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coefficients {
    Integers,
    PrimeField(u64),
}

/// A nonnegatively graded chain complex of finitely generated free abelian
/// groups with `∂ ∘ ∂ = 0` (verified on construction). `boundary(k)` maps
/// degree `k` to degree `k-1`.
#[derive(Debug, Clone)]
pub struct ChainComplex {
    ranks: Vec<usize>,
    boundaries: Vec<IntMatrix>,
}

impl ChainComplex {
    /// `boundaries[k-1]` is `∂_k : C_k → C_{k-1}` for `k = 1..ranks.len()`.
    pub fn new(ranks: Vec<usize>, boundaries: Vec<IntMatrix>) -> Result<Self, HomologyError> {
        if boundaries.len() + 1 != ranks.len().max(1) {
            return Err(HomologyError::Malformed(format!(
                "{} ranks need {} boundary maps",
                ranks.len(),
                ranks.len().saturating_sub(1)
            )));
        }
        for (k, b) in boundaries.iter().enumerate() {
            let deg = k + 1;
            if b.nrows() != ranks[deg - 1] || b.ncols() != ranks[deg] {
                return Err(HomologyError::Malformed(format!(
                    "boundary in degree {deg} has shape {}x{}, expected {}x{}",
                    b.nrows(),
                    b.ncols(),
                    ranks[deg - 1],
                    ranks[deg]
                )));
            }
        }
        for k in 1..boundaries.len() {
            if !boundaries[k - 1].mul(&boundaries[k]).is_zero() {
                return Err(HomologyError::BoundarySquare(k + 1));
            }
        }
        Ok(ChainComplex { ranks, boundaries })
    }

    pub fn top_degree(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn rank(&self, degree: usize) -> usize {
        self.ranks.get(degree).copied().unwrap_or(0)
    }

    /// `∂_k` for `1 <= k <= top_degree`; zero-shaped outside that range.
    pub fn boundary(&self, k: usize) -> IntMatrix {
        if k >= 1 && k <= self.boundaries.len() {
            self.boundaries[k - 1].clone()
        } else if k == 0 {
            IntMatrix::zero(0, self.rank(0))
        } else {
            IntMatrix::zero(self.rank(k.saturating_sub(1)), 0)
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.ranks
            .iter()
            .enumerate()
            .map(|(k, &r)| if k % 2 == 0 { r as i64 } else { -(r as i64) })
            .sum()
    }
}

/// One graded piece: free rank plus torsion coefficients sorted by
/// divisibility (each > 1, each dividing the next).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GradedPiece {
    pub degree: usize,
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

/// A graded abelian group, e.g. the reduced (co)homology of a pointed
/// simplicial set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GradedAbelianGroup {
    pub components: Vec<GradedPiece>,
}

impl GradedAbelianGroup {
    pub fn free_rank(&self, degree: usize) -> usize {
        self.components.iter().find(|c| c.degree == degree).map_or(0, |c| c.free_rank)
    }

    pub fn torsion(&self, degree: usize) -> &[u64] {
        self.components
            .iter()
            .find(|c| c.degree == degree)
            .map_or(&[], |c| c.torsion.as_slice())
    }

    pub fn is_trivial(&self) -> bool {
        self.components.iter().all(|c| c.free_rank == 0 && c.torsion.is_empty())
    }

    /// Degrees carrying a nonzero group.
    pub fn support(&self) -> Vec<usize> {
        self.components
            .iter()
            .filter(|c| c.free_rank > 0 || !c.torsion.is_empty())
            .map(|c| c.degree)
            .collect()
    }

    pub fn total_free_rank_alternating(&self) -> i64 {
        self.components
            .iter()
            .map(|c| {
                let r = c.free_rank as i64;
                if c.degree % 2 == 0 {
                    r
                } else {
                    -r
                }
            })
            .sum()
    }
}

/// The reduced normalized chain complex: basis in degree `k` is the set of
/// nondegenerate non-basepoint `k`-cells; the boundary is the alternating
/// sum of faces, with faces landing in degenerate cells or the basepoint
/// contributing zero.
pub fn normalized_chain_complex(
    s: &PointedSimplicialSet,
) -> Result<ChainComplex, HomologyError> {
    let top = s.bound();
    let ranks: Vec<usize> = (0..=top).map(|k| s.nondegenerate_count(k)).collect();
    let mut boundaries = Vec::with_capacity(top);
    for k in 1..=top {
        let mut triplets = Vec::new();
        for idx in 0..s.nondegenerate_count(k) {
            let cell = super::simplicial::Cell::generator(k, idx);
            for i in 0..=k {
                match s.face_of(&cell, i) {
                    super::simplicial::Cell::Of { base_level, base_index, word }
                        if word.is_empty() =>
                    {
                        debug_assert_eq!(base_level, k - 1);
                        triplets.push((base_index, idx, if i % 2 == 0 { 1 } else { -1 }));
                    }
                    _ => {}
                }
            }
        }
        boundaries.push(IntMatrix::from_triplets(ranks[k - 1], ranks[k], triplets));
    }
    ChainComplex::new(ranks, boundaries)
}

/// Reduced integral homology of the complex, via SNF: free rank in degree
/// `k` is `n_k - rank ∂_k - rank ∂_{k+1}`, torsion comes from the invariant
/// factors of `∂_{k+1}`.
pub fn homology_of_complex(c: &ChainComplex) -> Result<GradedAbelianGroup, HomologyError> {
    let top = c.top_degree();
    let snfs: Vec<_> = (1..=top)
        .map(|k| smith_normal_form(&c.boundary(k), false))
        .collect::<Result<_, _>>()?;
    let rank_of = |k: usize| -> usize {
        if k >= 1 && k <= top {
            snfs[k - 1].rank
        } else {
            0
        }
    };
    let mut components = Vec::new();
    for k in 0..=top {
        let free_rank = c.rank(k) - rank_of(k) - rank_of(k + 1);
        let torsion = if k + 1 <= top {
            invariants_to_torsion(&snfs[k].invariants)?
        } else {
            Vec::new()
        };
        components.push(GradedPiece { degree: k, free_rank, torsion });
    }
    Ok(GradedAbelianGroup { components })
}

fn invariants_to_torsion(invariants: &[num_bigint::BigInt]) -> Result<Vec<u64>, HomologyError> {
    use num_traits::One;
    invariants
        .iter()
        .filter(|d| !d.is_one())
        .map(|d| u64::try_from(d).map_err(|_| HomologyError::TorsionOverflow))
        .collect()
}

/// Reduced integral homology of a pointed simplicial set.
pub fn homology(s: &PointedSimplicialSet) -> Result<GradedAbelianGroup, HomologyError> {
    homology_of_complex(&normalized_chain_complex(s)?)
}

/// Reduced cohomology with the chosen coefficients, computed from the
/// transposed boundaries (an independent code path from [`homology`]; the
/// universal-coefficient relation between the two is asserted in tests).
pub fn cohomology(
    s: &PointedSimplicialSet,
    coefficients: Coefficients,
) -> Result<GradedAbelianGroup, HomologyError> {
    let c = normalized_chain_complex(s)?;
    cohomology_of_complex(&c, coefficients)
}

/// Cohomology of the dual of a chain complex: `δ^k = (∂_{k+1})ᵀ`.
pub fn cohomology_of_complex(
    c: &ChainComplex,
    coefficients: Coefficients,
) -> Result<GradedAbelianGroup, HomologyError> {
    let top = c.top_degree();
    let deltas: Vec<IntMatrix> = (0..=top).map(|k| c.boundary(k + 1).transpose()).collect();
    let mut components = Vec::new();
    match coefficients {
        Coefficients::Integers => {
            let snfs: Vec<_> = deltas
                .iter()
                .map(|d| smith_normal_form(d, false))
                .collect::<Result<Vec<_>, _>>()?;
            for k in 0..=top {
                let out_rank = snfs[k].rank;
                let in_rank = if k == 0 { 0 } else { snfs[k - 1].rank };
                let free_rank = c.rank(k) - out_rank - in_rank;
                let torsion = if k == 0 {
                    Vec::new()
                } else {
                    invariants_to_torsion(&snfs[k - 1].invariants)?
                };
                components.push(GradedPiece { degree: k, free_rank, torsion });
            }
        }
        Coefficients::PrimeField(p) => {
            let ranks: Vec<usize> = deltas.iter().map(|d| rank_mod_p(d, p)).collect();
            for k in 0..=top {
                let in_rank = if k == 0 { 0 } else { ranks[k - 1] };
                let free_rank = c.rank(k) - ranks[k] - in_rank;
                components.push(GradedPiece { degree: k, free_rank, torsion: Vec::new() });
            }
        }
    }
    Ok(GradedAbelianGroup { components })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::simplicial::{par_complex, par_complex_relabeled, sphere};
    use crate::poset::Perm;

    fn factorial(n: usize) -> usize {
        (1..=n).product()
    }

    #[test]
    fn sphere_homology() {
        for d in 0..=3 {
            let h = homology(&sphere(d)).unwrap();
            assert_eq!(h.support(), vec![d]);
            assert_eq!(h.free_rank(d), 1);
            assert!(h.torsion(d).is_empty());
        }
    }

    #[test]
    fn s0_complex_shape() {
        let c = normalized_chain_complex(&sphere(0)).unwrap();
        assert_eq!(c.rank(0), 1);
        assert!(c.boundary(1).is_zero());
    }

    #[test]
    fn par_small_complex_shapes() {
        // P(2): rank 1 in degree 1 only
        let c2 = normalized_chain_complex(&par_complex(2, 7).unwrap()).unwrap();
        assert_eq!((c2.rank(0), c2.rank(1), c2.rank(2)), (0, 1, 0));
        // P(3): ranks (0, 1, 3); each 2-cell has boundary ±(the edge)
        let c3 = normalized_chain_complex(&par_complex(3, 7).unwrap()).unwrap();
        assert_eq!((c3.rank(0), c3.rank(1), c3.rank(2)), (0, 1, 3));
        let b2 = c3.boundary(2).to_dense();
        for col in 0..3 {
            assert_eq!(b2[0][col].abs(), 1, "2-cell boundary hits the edge once");
        }
    }

    #[test]
    fn par_homology_wedge_formula() {
        for n in 1..=5 {
            let h = homology(&par_complex(n, 7).unwrap()).unwrap();
            assert_eq!(h.support(), vec![n - 1], "Par({n}) concentrated in degree n-1");
            assert_eq!(h.free_rank(n - 1), factorial(n - 1), "rank (n-1)! for n={n}");
            assert!(h.torsion(n - 1).is_empty());
        }
    }

    #[test]
    fn cohomology_universal_coefficients() {
        // with free homology concentrated in one degree, cohomology must
        // agree degreewise; mod-p ranks must also match
        for n in 2..=4 {
            let s = par_complex(n, 7).unwrap();
            let h = homology(&s).unwrap();
            let hz = cohomology(&s, Coefficients::Integers).unwrap();
            let h2 = cohomology(&s, Coefficients::PrimeField(2)).unwrap();
            for k in 0..=n {
                assert_eq!(h.free_rank(k), hz.free_rank(k));
                assert!(hz.torsion(k).is_empty());
                assert_eq!(h.free_rank(k), h2.free_rank(k));
            }
        }
    }

    #[test]
    fn euler_characteristic_consistency() {
        for n in 2..=5 {
            let s = par_complex(n, 7).unwrap();
            let c = normalized_chain_complex(&s).unwrap();
            let h = homology(&s).unwrap();
            assert_eq!(c.euler_characteristic(), h.total_free_rank_alternating());
        }
    }

    #[test]
    fn homology_invariant_under_relabeling() {
        for n in 2..=4 {
            let base = homology(&par_complex(n, 7).unwrap()).unwrap();
            for sigma in Perm::all(n) {
                let relabeled =
                    homology(&par_complex_relabeled(n, 7, &sigma).unwrap()).unwrap();
                assert_eq!(base, relabeled);
            }
        }
    }

    #[test]
    fn boundary_square_guard() {
        // a complex whose composite is nonzero must be rejected
        let bad = ChainComplex::new(
            vec![1, 1, 1],
            vec![
                IntMatrix::from_dense(&[vec![1]]),
                IntMatrix::from_dense(&[vec![1]]),
            ],
        );
        assert!(matches!(bad, Err(HomologyError::BoundarySquare(2))));
    }
}
