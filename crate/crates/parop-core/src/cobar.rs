//! The cosimplicial module of functions on the simplices of `P(n)`, its
//! cosimplicial identities, and the conormalized total complex whose
//! cohomology recovers the reduced cohomology of the partition complex.

use crate::homology::{
    kernel_basis, smith_normal_form, GradedAbelianGroup, HomologyError, IntMatrix,
};
use crate::homology::complex::GradedPiece;
use crate::poset::{simplices, PosetError, SimplexTable};
use crate::report::Report;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CobarError {
    #[error("poset error: {0}")]
    Poset(#[from] PosetError),
    #[error("homology error: {0}")]
    Homology(#[from] HomologyError),
    #[error("colevel {0} out of range")]
    ColevelOutOfRange(usize),
    #[error("malformed cosimplicial module: {0}")]
    Malformed(String),
}

/// A cosimplicial object of finitely generated free modules, with cofaces
/// and codegeneracies given by integer matrices. `coface(m, i)` maps
/// colevel `m-1` into colevel `m` (`i = 0..=m`); `codegeneracy(m, j)` maps
/// colevel `m+1` onto colevel `m` (`j = 0..=m`).
#[derive(Debug, Clone)]
pub struct CosimplicialModule {
    ranks: Vec<usize>,
    cofaces: Vec<Vec<IntMatrix>>,
    codegens: Vec<Vec<IntMatrix>>,
}

impl CosimplicialModule {
    pub fn new(
        ranks: Vec<usize>,
        cofaces: Vec<Vec<IntMatrix>>,
        codegens: Vec<Vec<IntMatrix>>,
    ) -> Result<Self, CobarError> {
        let bound = ranks.len().saturating_sub(1);
        if cofaces.len() != bound || codegens.len() != bound {
            return Err(CobarError::Malformed(format!(
                "expected {bound} coface/codegeneracy families"
            )));
        }
        for m in 1..=bound {
            let fam = &cofaces[m - 1];
            if fam.len() != m + 1 {
                return Err(CobarError::Malformed(format!(
                    "colevel {m} needs {} cofaces",
                    m + 1
                )));
            }
            for d in fam {
                if d.nrows() != ranks[m] || d.ncols() != ranks[m - 1] {
                    return Err(CobarError::Malformed(format!(
                        "coface into colevel {m} has shape {}x{}",
                        d.nrows(),
                        d.ncols()
                    )));
                }
            }
            let sam = &codegens[m - 1];
            if sam.len() != m {
                return Err(CobarError::Malformed(format!(
                    "colevel {} needs {} codegeneracies",
                    m - 1,
                    m
                )));
            }
            for s in sam {
                if s.nrows() != ranks[m - 1] || s.ncols() != ranks[m] {
                    return Err(CobarError::Malformed(format!(
                        "codegeneracy out of colevel {m} has shape {}x{}",
                        s.nrows(),
                        s.ncols()
                    )));
                }
            }
        }
        Ok(CosimplicialModule { ranks, cofaces, codegens })
    }

    /// The constant cosimplicial module on one copy of the integers.
    pub fn constant(bound: usize) -> Self {
        let ranks = vec![1usize; bound + 1];
        let cofaces = (1..=bound).map(|m| vec![IntMatrix::identity(1); m + 1]).collect();
        let codegens = (1..=bound).map(|m| vec![IntMatrix::identity(1); m]).collect();
        CosimplicialModule { ranks, cofaces, codegens }
    }

    pub fn bound(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn rank(&self, colevel: usize) -> usize {
        self.ranks.get(colevel).copied().unwrap_or(0)
    }

    /// `d^i : C^{m-1} → C^m`.
    pub fn coface(&self, m: usize, i: usize) -> &IntMatrix {
        &self.cofaces[m - 1][i]
    }

    /// `s^j : C^{m+1} → C^m`.
    pub fn codegeneracy(&self, m: usize, j: usize) -> &IntMatrix {
        &self.codegens[m][j]
    }

    /// Replace one coface (negative-control hook for the verifier).
    pub fn set_coface(&mut self, m: usize, i: usize, matrix: IntMatrix) {
        self.cofaces[m - 1][i] = matrix;
    }
}

/// Check every cosimplicial identity expressible within the stored bound as
/// exact matrix equality.
pub fn verify_cosimplicial(module: &CosimplicialModule) -> Report {
    let mut report = Report::new();
    let bound = module.bound();
    // d^j d^i = d^i d^{j-1}, i < j
    for m in 2..=bound {
        for j in 0..=m {
            for i in 0..j {
                let lhs = module.coface(m, j).mul(module.coface(m - 1, i));
                let rhs = module.coface(m, i).mul(module.coface(m - 1, j - 1));
                report.check(
                    lhs == rhs,
                    "d^j d^i = d^i d^{j-1}",
                    format!("colevel {} -> {}, i={i}, j={j}", m - 2, m),
                );
            }
        }
    }
    // s^j s^i = s^i s^{j+1}, i <= j
    for m in 0..bound.saturating_sub(1) {
        for j in 0..=m {
            for i in 0..=j {
                let lhs = module.codegeneracy(m, j).mul(module.codegeneracy(m + 1, i));
                let rhs = module.codegeneracy(m, i).mul(module.codegeneracy(m + 1, j + 1));
                report.check(
                    lhs == rhs,
                    "s^j s^i = s^i s^{j+1}",
                    format!("colevel {} -> {}, i={i}, j={j}", m + 2, m),
                );
            }
        }
    }
    // mixed identities at base colevel m: d^i : C^m → C^{m+1}, s^j : C^{m+1} → C^m
    for m in 0..bound {
        for j in 0..=m {
            for i in 0..=m + 1 {
                if i == j || i == j + 1 {
                    let lhs = module.codegeneracy(m, j).mul(module.coface(m + 1, i));
                    report.check(
                        lhs == IntMatrix::identity(module.rank(m)),
                        "s^j d^i = id (i = j, j+1)",
                        format!("colevel {m}, i={i}, j={j}"),
                    );
                } else if i < j {
                    let lhs = module.codegeneracy(m, j).mul(module.coface(m + 1, i));
                    let rhs = module.coface(m, i).mul(module.codegeneracy(m - 1, j - 1));
                    report.check(
                        lhs == rhs,
                        "s^j d^i = d^i s^{j-1} (i < j)",
                        format!("colevel {m}, i={i}, j={j}"),
                    );
                } else {
                    // i > j + 1, needs m >= 1
                    if m == 0 {
                        continue;
                    }
                    let lhs = module.codegeneracy(m, j).mul(module.coface(m + 1, i));
                    let rhs = module.coface(m, i - 1).mul(module.codegeneracy(m - 1, j));
                    report.check(
                        lhs == rhs,
                        "s^j d^i = d^{i-1} s^j (i > j+1)",
                        format!("colevel {m}, i={i}, j={j}"),
                    );
                }
            }
        }
    }
    report
}

/// The cobar cosimplicial module of the one-point sequence at arity `n`:
/// colevel `k` has basis the non-basepoint simplices of `P(n)_k` (including
/// degenerate ones); cofaces and codegeneracies are precomposition with the
/// faces and degeneracies of `P(n)`, with basepoint targets contributing
/// zero rows.
#[derive(Debug, Clone)]
pub struct CobarComplex {
    pub arity: usize,
    pub module: CosimplicialModule,
    pub tables: Vec<SimplexTable>,
}

pub fn cobar_sbar(n: usize, bound: usize, cap: usize) -> Result<CobarComplex, CobarError> {
    let tables: Vec<SimplexTable> =
        (0..=bound).map(|k| simplices(n, k, false, cap)).collect::<Result<_, _>>()?;
    let ranks: Vec<usize> = tables.iter().map(SimplexTable::len).collect();
    let mut cofaces = Vec::with_capacity(bound);
    let mut codegens = Vec::with_capacity(bound);
    for m in 1..=bound {
        let mut fam = Vec::with_capacity(m + 1);
        for i in 0..=m {
            let mut triplets = Vec::new();
            for (row, chain) in tables[m].chains.iter().enumerate() {
                let f = chain.face(i)?;
                if let Some(col) = tables[m - 1].position(&f) {
                    triplets.push((row, col, 1i64));
                }
            }
            fam.push(IntMatrix::from_triplets(ranks[m], ranks[m - 1], triplets));
        }
        cofaces.push(fam);
        let mut sam = Vec::with_capacity(m);
        for j in 0..m {
            let mut triplets = Vec::new();
            for (row, chain) in tables[m - 1].chains.iter().enumerate() {
                let s = chain.degeneracy(j)?;
                let col = tables[m].position(&s).expect("degeneracy stays non-basepoint");
                triplets.push((row, col, 1i64));
            }
            sam.push(IntMatrix::from_triplets(ranks[m - 1], ranks[m], triplets));
        }
        codegens.push(sam);
    }
    Ok(CobarComplex { arity: n, module: CosimplicialModule::new(ranks, cofaces, codegens)?, tables })
}

/// The conormalized total complex: degree `s` is the intersection of the
/// kernels of all codegeneracies out of colevel `s` (realized on the basis
/// of nondegenerate simplices), with differential the alternating coface
/// sum. Construction verifies that the alternating sum preserves the
/// conormalized subspace and that the differential squares to zero.
#[derive(Debug, Clone)]
pub struct TotalComplex {
    pub ranks: Vec<usize>,
    /// `differentials[s]`: degree `s` → degree `s+1`.
    pub differentials: Vec<IntMatrix>,
    /// positions of the nondegenerate simplices inside each full colevel
    pub nondegenerate: Vec<Vec<usize>>,
}

pub fn conormalized_total(cobar: &CobarComplex) -> Result<TotalComplex, CobarError> {
    let bound = cobar.module.bound();
    let nondeg: Vec<Vec<usize>> = cobar
        .tables
        .iter()
        .map(|t| {
            t.chains
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_degenerate())
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    let ranks: Vec<usize> = nondeg.iter().map(Vec::len).collect();
    let mut differentials = Vec::with_capacity(bound);
    for s in 0..bound {
        // alternating sum of cofaces on the full colevel
        let mut delta_full = IntMatrix::zero(cobar.module.rank(s + 1), cobar.module.rank(s));
        for i in 0..=s + 1 {
            let signed = scale(cobar.module.coface(s + 1, i), if i % 2 == 0 { 1 } else { -1 });
            delta_full = add(&delta_full, &signed);
        }
        // restricted to cochains supported on nondegenerate simplices, the
        // alternating sum must again vanish on degenerate simplices
        let col_pos: Vec<Option<usize>> = {
            let mut v = vec![None; cobar.module.rank(s)];
            for (new, &old) in nondeg[s].iter().enumerate() {
                v[old] = Some(new);
            }
            v
        };
        let row_nondeg: Vec<Option<usize>> = {
            let mut v = vec![None; cobar.module.rank(s + 1)];
            for (new, &old) in nondeg[s + 1].iter().enumerate() {
                v[old] = Some(new);
            }
            v
        };
        let mut triplets = Vec::new();
        for r in 0..cobar.module.rank(s + 1) {
            for (c, val) in delta_full.row(r) {
                let Some(new_c) = col_pos[c as usize] else { continue };
                match row_nondeg[r] {
                    Some(new_r) => triplets.push((new_r, new_c, val)),
                    None => {
                        return Err(CobarError::Malformed(format!(
                            "conormalization broken: degenerate simplex {r} receives a \
                             nonzero coefficient in degree {s}"
                        )))
                    }
                }
            }
        }
        differentials.push(IntMatrix::from_triplets(ranks[s + 1], ranks[s], triplets));
    }
    for s in 0..bound.saturating_sub(1) {
        if !differentials[s + 1].mul(&differentials[s]).is_zero() {
            return Err(CobarError::Malformed(format!("delta^2 != 0 in degree {s}")));
        }
    }
    Ok(TotalComplex { ranks, differentials, nondegenerate: nondeg })
}

fn scale(m: &IntMatrix, by: i64) -> IntMatrix {
    let mut triplets = Vec::with_capacity(m.nnz());
    for r in 0..m.nrows() {
        for (c, v) in m.row(r) {
            triplets.push((r, c as usize, v * by));
        }
    }
    IntMatrix::from_triplets(m.nrows(), m.ncols(), triplets)
}

fn add(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let mut triplets = Vec::with_capacity(a.nnz() + b.nnz());
    for r in 0..a.nrows() {
        for (c, v) in a.row(r) {
            triplets.push((r, c as usize, v));
        }
        for (c, v) in b.row(r) {
            triplets.push((r, c as usize, v));
        }
    }
    IntMatrix::from_triplets(a.nrows(), a.ncols(), triplets)
}

/// Cohomology of the conormalized total complex of the cobar object at
/// arity `n` (graded free ranks and torsion, exactly).
pub fn tot_cohomology(n: usize, cap: usize) -> Result<GradedAbelianGroup, CobarError> {
    let bound = n + 1;
    let cobar = cobar_sbar(n, bound, cap)?;
    let total = conormalized_total(&cobar)?;
    let top = total.ranks.len() - 1;
    let snfs: Vec<_> = total
        .differentials
        .iter()
        .map(|d| smith_normal_form(d, false))
        .collect::<Result<Vec<_>, _>>()?;
    let rank_of = |s: usize| -> usize {
        if s < snfs.len() {
            snfs[s].rank
        } else {
            0
        }
    };
    let mut components = Vec::new();
    for s in 0..=top {
        use num_traits::One;
        let out_rank = rank_of(s);
        let in_rank = if s == 0 { 0 } else { rank_of(s - 1) };
        let free_rank = total.ranks[s] - out_rank - in_rank;
        let torsion: Vec<u64> = if s == 0 {
            Vec::new()
        } else {
            snfs[s - 1]
                .invariants
                .iter()
                .filter(|d| !d.is_one())
                .map(|d| u64::try_from(d).expect("small torsion"))
                .collect()
        };
        components.push(GradedPiece { degree: s, free_rank, torsion });
    }
    Ok(GradedAbelianGroup { components })
}

/// Rank of the honest kernel intersection of the codegeneracies out of
/// colevel `s` (an independent check that conormalized cochains are exactly
/// the functions vanishing on degenerate simplices).
pub fn conormalized_rank_by_kernel(
    cobar: &CobarComplex,
    s: usize,
) -> Result<usize, CobarError> {
    if s == 0 {
        return Ok(cobar.module.rank(0));
    }
    if s > cobar.module.bound() {
        return Err(CobarError::ColevelOutOfRange(s));
    }
    // stack s^0..s^{s-1}: C^s -> (C^{s-1})^s
    let rows: usize = s * cobar.module.rank(s - 1);
    let mut triplets = Vec::new();
    for j in 0..s {
        let m = cobar.module.codegeneracy(s - 1, j);
        for r in 0..m.nrows() {
            for (c, v) in m.row(r) {
                triplets.push((j * cobar.module.rank(s - 1) + r, c as usize, v));
            }
        }
    }
    let stacked = IntMatrix::from_triplets(rows, cobar.module.rank(s), triplets);
    Ok(kernel_basis(&stacked)?.len())
}
