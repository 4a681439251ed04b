//! Box-product colevels as explicit coequalizer presentations, and the
//! factorization of the pairing family through them.

use super::mpq::{composed_source, inner_coface_matrix, level_tables, m_pq, outer_coface_matrix};
use super::PairingError;
use crate::cobar::CosimplicialModule;
use crate::homology::{smith_normal_form, IntMatrix};
use crate::report::Report;
use num_traits::One;

/// Colevel `n` of a box product, presented as the cokernel of the
/// difference map from the colevel-(n-1) blocks: ambient space
/// `⊕_{p+q=n} X^p ⊗ Y^q` modulo the images of `id⊗d⁰ - d^{r+1}⊗id`.
#[derive(Debug, Clone)]
pub struct BoxLevel {
    pub colevel: usize,
    pub blocks: Vec<(usize, usize, usize)>,
    pub ambient_rank: usize,
    pub relation_rank: usize,
    pub quotient_rank: usize,
    pub torsion: Vec<u64>,
}

fn kronecker(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let mut triplets = Vec::with_capacity(a.nnz() * b.nnz());
    for ra in 0..a.nrows() {
        for (ca, va) in a.row(ra) {
            for rb in 0..b.nrows() {
                for (cb, vb) in b.row(rb) {
                    triplets.push((
                        ra * b.nrows() + rb,
                        ca as usize * b.ncols() + cb as usize,
                        va * vb,
                    ));
                }
            }
        }
    }
    IntMatrix::from_triplets(a.nrows() * b.nrows(), a.ncols() * b.ncols(), triplets)
}

/// Compute colevel `n` of `X □ Y` for cosimplicial modules (levelwise
/// tensor), with the relation certificate coming from the Smith form of the
/// difference map.
pub fn box_level(
    x: &CosimplicialModule,
    y: &CosimplicialModule,
    n: usize,
) -> Result<BoxLevel, PairingError> {
    if n > x.bound() || n > y.bound() {
        return Err(PairingError::Invalid(format!("colevel {n} beyond a stored bound")));
    }
    let blocks: Vec<(usize, usize, usize)> =
        (0..=n).map(|p| (p, n - p, x.rank(p) * y.rank(n - p))).collect();
    let ambient_rank: usize = blocks.iter().map(|b| b.2).sum();
    let mut row_offsets = vec![0usize; n + 2];
    for p in 0..=n {
        row_offsets[p + 1] = row_offsets[p] + blocks[p].2;
    }
    // relation columns from (r, s), r + s = n - 1
    let mut col_offsets = vec![0usize];
    let mut rel_dims = Vec::new();
    if n >= 1 {
        for r in 0..n {
            let s = n - 1 - r;
            let d = x.rank(r) * y.rank(s);
            rel_dims.push((r, s, d));
            col_offsets.push(col_offsets.last().unwrap() + d);
        }
    }
    let total_cols = *col_offsets.last().unwrap();
    let mut triplets = Vec::new();
    for (idx, &(r, s, _)) in rel_dims.iter().enumerate() {
        // id ⊗ d^0 into block (r, s+1)
        let up = kronecker(&IntMatrix::identity(x.rank(r)), y.coface(s + 1, 0));
        for row in 0..up.nrows() {
            for (c, v) in up.row(row) {
                triplets.push((row_offsets[r] + row, col_offsets[idx] + c as usize, v));
            }
        }
        // -(d^{r+1} ⊗ id) into block (r+1, s)
        let down = kronecker(x.coface(r + 1, r + 1), &IntMatrix::identity(y.rank(s)));
        for row in 0..down.nrows() {
            for (c, v) in down.row(row) {
                triplets.push((row_offsets[r + 1] + row, col_offsets[idx] + c as usize, -v));
            }
        }
    }
    let difference = IntMatrix::from_triplets(ambient_rank, total_cols, triplets);
    let snf = smith_normal_form(&difference, false)?;
    let torsion = snf
        .invariants
        .iter()
        .filter(|d| !d.is_one())
        .map(|d| u64::try_from(d).expect("small torsion"))
        .collect();
    Ok(BoxLevel {
        colevel: n,
        blocks,
        ambient_rank,
        relation_rank: snf.rank,
        quotient_rank: ambient_rank - snf.rank,
        torsion,
    })
}

/// Check that the family `{m_{p,q}}` kills the box-product relations of the
/// composition-product blocks at arity `k` and colevel `n`, i.e. that the
/// induced map out of the coequalizer exists.
pub fn box_factorization(k: usize, n: usize, cap: usize) -> Result<Report, PairingError> {
    let mut report = Report::new();
    if n == 0 {
        report.check(true, "m factors through the box colevel", format!("k={k}, n=0 (no relations)"));
        return Ok(report);
    }
    // stacked pairing map M on the ambient sum
    let sources: Vec<_> =
        (0..=n).map(|p| composed_source(k, p, n - p, cap)).collect::<Result<Vec<_>, _>>()?;
    let maps: Vec<_> = (0..=n).map(|p| m_pq(k, p, n - p, cap)).collect::<Result<Vec<_>, _>>()?;
    let target_rank = maps[0].matrix.nrows();
    let mut col_offsets = vec![0usize];
    for ci in &sources {
        col_offsets.push(col_offsets.last().unwrap() + ci.len());
    }
    let ambient = *col_offsets.last().unwrap();
    let mut m_triplets = Vec::new();
    for (p, m) in maps.iter().enumerate() {
        for row in 0..m.matrix.nrows() {
            for (c, v) in m.matrix.row(row) {
                m_triplets.push((row, col_offsets[p] + c as usize, v));
            }
        }
    }
    let stacked_m = IntMatrix::from_triplets(target_rank, ambient, m_triplets);
    // difference map from the (r, s) blocks
    let mut rel_offsets = vec![0usize];
    let mut rel_sources = Vec::new();
    for r in 0..n {
        let s = n - 1 - r;
        let ci = composed_source(k, r, s, cap)?;
        rel_offsets.push(rel_offsets.last().unwrap() + ci.len());
        rel_sources.push(ci);
    }
    let rel_total = *rel_offsets.last().unwrap();
    let mut d_triplets = Vec::new();
    for r in 0..n {
        let s = n - 1 - r;
        let src = &rel_sources[r];
        let t_r = level_tables(k, r, cap)?;
        let t_r1 = level_tables(k, r + 1, cap)?;
        let t_s = level_tables(k, s, cap)?;
        let t_s1 = level_tables(k, s + 1, cap)?;
        let up = inner_coface_matrix(src, &sources[r], 0, &t_s, &t_s1)?;
        for row in 0..up.nrows() {
            for (c, v) in up.row(row) {
                d_triplets.push((col_offsets[r] + row, rel_offsets[r] + c as usize, v));
            }
        }
        let down = outer_coface_matrix(src, &sources[r + 1], r + 1, &t_r, &t_r1)?;
        for row in 0..down.nrows() {
            for (c, v) in down.row(row) {
                d_triplets.push((col_offsets[r + 1] + row, rel_offsets[r] + c as usize, -v));
            }
        }
    }
    let difference = IntMatrix::from_triplets(ambient, rel_total, d_triplets);
    let composite = stacked_m.mul(&difference);
    report.check(
        composite.is_zero(),
        "m factors through the box colevel",
        format!("k={k}, n={n}"),
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cobar::{cobar_sbar, CosimplicialModule};
    use crate::poset::DEFAULT_SIMPLEX_CAP;

    const CAP: usize = DEFAULT_SIMPLEX_CAP;

    #[test]
    fn colevel_zero_is_the_plain_tensor() {
        let x = CosimplicialModule::constant(3);
        let y = cobar_sbar(2, 3, CAP).unwrap().module;
        let b = box_level(&x, &y, 0).unwrap();
        assert_eq!(b.ambient_rank, x.rank(0) * y.rank(0));
        assert_eq!(b.quotient_rank, b.ambient_rank);
        assert_eq!(b.relation_rank, 0);
    }

    #[test]
    fn constant_box_constant_is_constant() {
        let x = CosimplicialModule::constant(4);
        for n in 0..=4 {
            let b = box_level(&x, &x, n).unwrap();
            assert_eq!(b.quotient_rank, 1, "colevel {n}");
            assert!(b.torsion.is_empty());
        }
    }

    #[test]
    fn pairing_family_factors_through_the_box() {
        for k in 1..=3 {
            for n in 0..=3 {
                let report = box_factorization(k, n, CAP).unwrap();
                assert!(report.ok(), "k={k} n={n}: {:?}", report.violations.first());
            }
        }
    }
}
