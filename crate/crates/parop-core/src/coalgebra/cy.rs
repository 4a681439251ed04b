//! The truncated coalgebra cosimplicial object: colevel `k` collects, for
//! each arity `n ≤ N` and each orbit of non-basepoint simplices of
//! `P(n)_k`, the signed-orbit coinvariants of `n`-fold cell tensors.
//!
//! Cofaces `d^0..d^k` pull back along the faces of the simplex index (the
//! cooperad structure maps of the one-point sequence are identities);
//! `d^{k+1}` is the diagonal insertion along the second-to-last partition.
//! Codegeneracies pull back along degeneracies. All cosimplicial identities
//! are machine-checked on construction.

use super::space::{CellRef, DiagonalCoalgebra};
use super::{act_tuple, CoalgebraError, Field};
use crate::cobar::{verify_cosimplicial, CosimplicialModule};
use crate::homology::IntMatrix;
use crate::poset::{simplices, PChain, Perm, SimplexTable};
use std::collections::HashMap;

/// Orbits of the simplex table under the relabeling action: for every chain
/// its orbit representative (by first appearance) and a transporter onto it.
#[derive(Debug, Clone)]
pub(crate) struct OrbitTable {
    pub table: SimplexTable,
    pub reps: Vec<usize>,
    /// per chain: (ordinal of its representative in `reps`, τ with τ·chain = rep)
    pub to_rep: Vec<(usize, Perm)>,
}

pub(crate) fn orbit_table(n: usize, k: usize, cap: usize) -> Result<OrbitTable, CoalgebraError> {
    let table = simplices(n, k, false, cap)?;
    let sigmas = Perm::all(n);
    let mut to_rep: Vec<Option<(usize, Perm)>> = vec![None; table.len()];
    let mut reps = Vec::new();
    for i in 0..table.len() {
        if to_rep[i].is_some() {
            continue;
        }
        let rep_ordinal = reps.len();
        reps.push(i);
        for sigma in &sigmas {
            let moved = table.chains[i].act(sigma)?;
            let j = table.position(&moved).expect("action permutes the table");
            if to_rep[j].is_none() {
                // σ·chain_i = chain_j, so σ^{-1}·chain_j = chain_i = rep
                to_rep[j] = Some((rep_ordinal, sigma.inverse()));
            }
        }
    }
    Ok(OrbitTable {
        table,
        reps,
        to_rep: to_rep.into_iter().map(Option::unwrap).collect(),
    })
}

/// One block of a colevel: the signed-orbit coinvariants of cell tensors at
/// a fixed arity and orbit representative.
#[derive(Debug, Clone)]
pub struct CYBlock {
    pub arity: usize,
    pub rep: PChain,
    pub rep_is_degenerate: bool,
    stabilizer: Vec<Perm>,
    pub tensors: Vec<Vec<CellRef>>,
    index: HashMap<Vec<CellRef>, usize>,
}

impl CYBlock {
    /// Resolve a raw tuple into the orbit basis: `None` when the orbit dies
    /// (a stabilizer element fixes the tuple with sign -1 away from
    /// characteristic two).
    pub fn resolve(
        &self,
        tuple: &[CellRef],
        space: &DiagonalCoalgebra,
        field: Field,
    ) -> Option<(usize, i64)> {
        let _ = space;
        let degrees: Vec<usize> = tuple.iter().map(|c| c.degree).collect();
        let mut best: Option<(Vec<CellRef>, i64)> = None;
        let mut dead = false;
        for sigma in &self.stabilizer {
            let (moved, mut sign) = act_tuple(sigma, tuple, &degrees);
            if field.characteristic_two() {
                sign = 1;
            }
            match &best {
                Some((b, s)) if *b == moved => {
                    if *s != sign {
                        dead = true;
                    }
                }
                Some((b, _)) if *b < moved => {}
                _ => best = Some((moved, sign)),
            }
        }
        if dead {
            return None;
        }
        let (canonical, sign) = best.expect("stabilizer contains the identity");
        // a second pass to catch sign clashes against the minimal form
        for sigma in &self.stabilizer {
            let (moved, mut s) = act_tuple(sigma, tuple, &degrees);
            if field.characteristic_two() {
                s = 1;
            }
            if moved == canonical && s != sign {
                return None;
            }
        }
        let idx = self.index.get(&canonical)?;
        Some((*idx, sign))
    }
}

/// A colevel of the truncated object, with a flat basis across blocks.
#[derive(Debug, Clone)]
pub struct CYColevel {
    pub blocks: Vec<CYBlock>,
    pub offsets: Vec<usize>,
    pub total_dim: usize,
    /// chain degree of each flat basis element
    pub degrees: Vec<usize>,
    /// (arity, orbit ordinal) per block, used for lookups
    block_of: HashMap<(usize, usize), usize>,
}

impl CYColevel {
    pub fn dim(&self) -> usize {
        self.total_dim
    }

    pub fn basis_label(&self, flat: usize) -> (usize, &PChain, &[CellRef]) {
        let b = self
            .offsets
            .iter()
            .rposition(|&o| o <= flat)
            .expect("offset table covers the basis");
        let block = &self.blocks[b];
        (block.arity, &block.rep, &block.tensors[flat - self.offsets[b]])
    }
}

/// The truncated coalgebra object `C(Y)` with its structure maps.
#[derive(Debug, Clone)]
pub struct TruncatedCY {
    pub truncation: usize,
    pub field: Field,
    pub bound: usize,
    pub space: DiagonalCoalgebra,
    pub colevels: Vec<CYColevel>,
    pub cofaces: Vec<Vec<IntMatrix>>,
    pub codegens: Vec<Vec<IntMatrix>>,
    orbit_tables: Vec<Vec<OrbitTable>>,
    /// count of diagonal-coface components dropped by the arity truncation
    pub dropped_terms: usize,
}

/// Construction options; `omit_diagonal` deliberately drops the
/// arity-raising part of the top coface and is used as a negative control.
#[derive(Debug, Clone, Copy, Default)]
pub struct CyOptions {
    pub omit_diagonal: bool,
    pub skip_verification: bool,
}

pub fn build_cy(
    space: DiagonalCoalgebra,
    truncation: usize,
    field: Field,
    bound: usize,
    cap: usize,
) -> Result<TruncatedCY, CoalgebraError> {
    build_cy_with(space, truncation, field, bound, cap, CyOptions::default())
}

pub fn build_cy_with(
    space: DiagonalCoalgebra,
    truncation: usize,
    field: Field,
    bound: usize,
    cap: usize,
    options: CyOptions,
) -> Result<TruncatedCY, CoalgebraError> {
    assert!(truncation >= 1);
    // orbit tables for all arities and colevels
    let mut orbit_tables = Vec::with_capacity(truncation);
    for n in 1..=truncation {
        let per_level: Vec<OrbitTable> =
            (0..=bound).map(|k| orbit_table(n, k, cap)).collect::<Result<_, _>>()?;
        orbit_tables.push(per_level);
    }
    // all cell tuples per arity
    let cells = space.cells();
    let mut tuples_by_arity: Vec<Vec<Vec<CellRef>>> = Vec::with_capacity(truncation + 1);
    tuples_by_arity.push(vec![Vec::new()]);
    for _ in 1..=truncation {
        let prev = tuples_by_arity.last().unwrap();
        let mut next = Vec::with_capacity(prev.len() * cells.len());
        for t in prev {
            for &c in &cells {
                let mut longer = t.clone();
                longer.push(c);
                next.push(longer);
            }
        }
        tuples_by_arity.push(next);
    }

    let mut colevels = Vec::with_capacity(bound + 1);
    for k in 0..=bound {
        let mut blocks = Vec::new();
        let mut block_of = HashMap::new();
        for n in 1..=truncation {
            let orbits = &orbit_tables[n - 1][k];
            for (ordinal, &rep_pos) in orbits.reps.iter().enumerate() {
                let rep = orbits.table.chains[rep_pos].clone();
                let stabilizer = rep.stabilizer();
                let mut tensors = Vec::new();
                let mut index = HashMap::new();
                let mut visited: HashMap<Vec<CellRef>, bool> = HashMap::new();
                for tuple in &tuples_by_arity[n] {
                    if visited.contains_key(tuple) {
                        continue;
                    }
                    let degrees: Vec<usize> = tuple.iter().map(|c| c.degree).collect();
                    let mut dead = false;
                    let mut orbit = Vec::new();
                    for sigma in &stabilizer {
                        let (moved, mut sign) = act_tuple(sigma, tuple, &degrees);
                        if field.characteristic_two() {
                            sign = 1;
                        }
                        if moved == *tuple && sign == -1 {
                            dead = true;
                        }
                        orbit.push(moved);
                    }
                    // death can also occur at any other orbit member
                    if !dead {
                        for member in &orbit {
                            let mdeg: Vec<usize> = member.iter().map(|c| c.degree).collect();
                            for sigma in &stabilizer {
                                let (moved, mut sign) = act_tuple(sigma, member, &mdeg);
                                if field.characteristic_two() {
                                    sign = 1;
                                }
                                if &moved == member && sign == -1 {
                                    dead = true;
                                }
                            }
                        }
                    }
                    for member in orbit {
                        visited.insert(member, true);
                    }
                    if !dead {
                        index.insert(tuple.clone(), tensors.len());
                        tensors.push(tuple.clone());
                    }
                }
                block_of.insert((n, ordinal), blocks.len());
                blocks.push(CYBlock {
                    arity: n,
                    rep_is_degenerate: rep.is_degenerate(),
                    rep,
                    stabilizer,
                    tensors,
                    index,
                });
            }
        }
        let mut offsets = Vec::with_capacity(blocks.len());
        let mut total = 0usize;
        let mut degrees = Vec::new();
        for b in &blocks {
            offsets.push(total);
            total += b.tensors.len();
            degrees
                .extend(b.tensors.iter().map(|t| t.iter().map(|c| c.degree).sum::<usize>()));
        }
        colevels.push(CYColevel { blocks, offsets, total_dim: total, degrees, block_of });
    }

    let mut cy = TruncatedCY {
        truncation,
        field,
        bound,
        space,
        colevels,
        cofaces: Vec::new(),
        codegens: Vec::new(),
        orbit_tables,
        dropped_terms: 0,
    };
    let mut cofaces = Vec::with_capacity(bound);
    let mut codegens = Vec::with_capacity(bound);
    let mut dropped = 0usize;
    for m in 1..=bound {
        let mut fam = Vec::with_capacity(m + 1);
        for i in 0..m {
            fam.push(cy.pullback_coface(m, i)?);
        }
        fam.push(cy.diagonal_coface(m, options.omit_diagonal, &mut dropped)?);
        cofaces.push(fam);
        let mut sam = Vec::with_capacity(m);
        for j in 0..m {
            sam.push(cy.pullback_codegeneracy(m - 1, j)?);
        }
        codegens.push(sam);
    }
    cy.cofaces = cofaces;
    cy.codegens = codegens;
    cy.dropped_terms = dropped;
    if !options.skip_verification && !options.omit_diagonal {
        let report = verify_cosimplicial(&cy.as_cosimplicial()?);
        if !report.ok() {
            return Err(CoalgebraError::Identity(format!(
                "{} violations, first: {:?}",
                report.violations.len(),
                report.violations.first()
            )));
        }
    }
    Ok(cy)
}

impl TruncatedCY {
    pub fn dim(&self, colevel: usize) -> usize {
        self.colevels.get(colevel).map_or(0, CYColevel::dim)
    }

    /// `d^i : C(Y)^{m-1} → C(Y)^m`.
    pub fn coface(&self, m: usize, i: usize) -> &IntMatrix {
        &self.cofaces[m - 1][i]
    }

    /// `s^j : C(Y)^{m+1} → C(Y)^m`.
    pub fn codegeneracy(&self, m: usize, j: usize) -> &IntMatrix {
        &self.codegens[m][j]
    }

    /// Resolve a raw component element `(arity, chain, tuple)` at `colevel`
    /// into the flat orbit basis.
    pub fn resolve(
        &self,
        colevel: usize,
        arity: usize,
        chain: &PChain,
        tuple: &[CellRef],
    ) -> Result<Option<(usize, i64)>, CoalgebraError> {
        if arity > self.truncation {
            return Ok(None);
        }
        let orbits = &self.orbit_tables[arity - 1][colevel];
        let Some(pos) = orbits.table.position(chain) else {
            return Ok(None);
        };
        let (ordinal, tau) = &orbits.to_rep[pos];
        let degrees: Vec<usize> = tuple.iter().map(|c| c.degree).collect();
        let (moved, mut sign) = act_tuple(tau, tuple, &degrees);
        if self.field.characteristic_two() {
            sign = 1;
        }
        let level = &self.colevels[colevel];
        let block_idx = level.block_of[&(arity, *ordinal)];
        let block = &level.blocks[block_idx];
        Ok(block.resolve(&moved, &self.space, self.field).map(|(idx, s)| {
            (level.offsets[block_idx] + idx, sign * s)
        }))
    }

    /// Cofaces `d^0..d^k`: pull back along the face of the simplex index,
    /// the tensor part untouched. `d^0` can hit the basepoint.
    fn pullback_coface(&self, m: usize, i: usize) -> Result<IntMatrix, CoalgebraError> {
        let target = &self.colevels[m];
        let mut triplets = Vec::new();
        for (b_idx, block) in target.blocks.iter().enumerate() {
            let face = block.rep.face(i)?;
            for (t_idx, tuple) in block.tensors.iter().enumerate() {
                if let Some((src, sign)) =
                    self.resolve(m - 1, block.arity, &face, tuple)?
                {
                    triplets.push((target.offsets[b_idx] + t_idx, src, sign));
                }
            }
        }
        Ok(IntMatrix::from_triplets(self.dim(m), self.dim(m - 1), triplets))
    }

    /// The diagonal coface `d^m`: the component at a colevel-`m` simplex
    /// with second-to-last partition `λ = {T_1..T_n}` receives the
    /// `|T_i|`-fold diagonals of the component at the front-face quotient,
    /// spread into the slots of each block with the interleaving Koszul
    /// sign.
    fn diagonal_coface(
        &self,
        m: usize,
        omit: bool,
        dropped: &mut usize,
    ) -> Result<IntMatrix, CoalgebraError> {
        let target = &self.colevels[m];
        let mut triplets = Vec::new();
        for (b_idx, block) in target.blocks.iter().enumerate() {
            let entries = block.rep.entries().expect("non-basepoint representative");
            let lambda = &entries[m - 1];
            let n = lambda.block_count();
            if n > self.truncation {
                *dropped += block.tensors.len();
                continue;
            }
            if omit && n != block.arity {
                *dropped += block.tensors.len();
                continue;
            }
            // front-face quotient: entries 0..m-1 reduced along λ
            let front: Vec<_> = entries[..m]
                .iter()
                .map(|e| e.quotient_by(lambda).expect("chain entries are coarser"))
                .collect();
            let source_chain = PChain::new(n, front)?;
            // slot map: block t of λ occupies the positions of its elements
            let slot_of: Vec<Vec<usize>> = lambda
                .blocks()
                .iter()
                .map(|b| b.iter().map(|&x| x as usize - 1).collect())
                .collect();
            for source_tuple in self.all_tuples(n) {
                let Some((src, s_src)) =
                    self.resolve(m - 1, n, &source_chain, &source_tuple)?
                else {
                    continue;
                };
                // expand each factor by the iterated diagonal of its block size
                let expansions: Vec<Vec<Vec<CellRef>>> = (0..n)
                    .map(|i| self.space.iterated_diagonal(source_tuple[i], slot_of[i].len()))
                    .collect();
                if expansions.iter().any(Vec::is_empty) {
                    continue;
                }
                let mut counters = vec![0usize; n];
                loop {
                    // assemble the arranged tuple and the interleave sign
                    let mut arranged: Vec<Option<CellRef>> =
                        vec![None; block.arity];
                    let mut concat: Vec<CellRef> = Vec::with_capacity(block.arity);
                    let mut positions: Vec<usize> = Vec::with_capacity(block.arity);
                    for i in 0..n {
                        let piece = &expansions[i][counters[i]];
                        for (l, &cell) in piece.iter().enumerate() {
                            arranged[slot_of[i][l]] = Some(cell);
                            concat.push(cell);
                            positions.push(slot_of[i][l]);
                        }
                    }
                    let arranged: Vec<CellRef> =
                        arranged.into_iter().map(Option::unwrap).collect();
                    // Koszul sign of sorting `concat` into slot order
                    let sign_arrange = interleave_sign(&positions, &concat, self.field);
                    if let Some((t_idx, s_t)) =
                        block.resolve(&arranged, &self.space, self.field)
                    {
                        triplets.push((
                            target.offsets[b_idx] + t_idx,
                            src,
                            s_src * sign_arrange * s_t,
                        ));
                    }
                    // odometer
                    let mut pos = 0;
                    while pos < n {
                        counters[pos] += 1;
                        if counters[pos] < expansions[pos].len() {
                            break;
                        }
                        counters[pos] = 0;
                        pos += 1;
                    }
                    if pos == n {
                        break;
                    }
                }
            }
        }
        Ok(IntMatrix::from_triplets(self.dim(m), self.dim(m - 1), triplets))
    }

    fn pullback_codegeneracy(&self, m: usize, j: usize) -> Result<IntMatrix, CoalgebraError> {
        let target = &self.colevels[m];
        let mut triplets = Vec::new();
        for (b_idx, block) in target.blocks.iter().enumerate() {
            let degenerated = block.rep.degeneracy(j)?;
            for (t_idx, tuple) in block.tensors.iter().enumerate() {
                if let Some((src, sign)) =
                    self.resolve(m + 1, block.arity, &degenerated, tuple)?
                {
                    triplets.push((target.offsets[b_idx] + t_idx, src, sign));
                }
            }
        }
        Ok(IntMatrix::from_triplets(self.dim(m), self.dim(m + 1), triplets))
    }

    fn all_tuples(&self, n: usize) -> Vec<Vec<CellRef>> {
        let cells = self.space.cells();
        let mut out: Vec<Vec<CellRef>> = vec![Vec::new()];
        for _ in 0..n {
            let mut next = Vec::with_capacity(out.len() * cells.len());
            for t in &out {
                for &c in &cells {
                    let mut longer = t.clone();
                    longer.push(c);
                    next.push(longer);
                }
            }
            out = next;
        }
        out
    }

    /// The vertical chain differential on a colevel (slotwise boundary with
    /// Koszul signs); commutes with all structure maps.
    pub fn vertical_boundary(&self, colevel: usize) -> Result<IntMatrix, CoalgebraError> {
        let level = &self.colevels[colevel];
        let mut triplets = Vec::new();
        for (b_idx, block) in level.blocks.iter().enumerate() {
            for (t_idx, tuple) in block.tensors.iter().enumerate() {
                let src_flat = level.offsets[b_idx] + t_idx;
                let mut sign_prefix = 1i64;
                for slot in 0..tuple.len() {
                    for (bcell, coeff) in self.space.boundary_of(tuple[slot]) {
                        let mut new_tuple = tuple.clone();
                        new_tuple[slot] = bcell;
                        if let Some((row, s)) =
                            block.resolve(&new_tuple, &self.space, self.field)
                        {
                            triplets.push((
                                level.offsets[b_idx] + row,
                                src_flat,
                                sign_prefix * coeff * s,
                            ));
                        }
                    }
                    if tuple[slot].degree % 2 == 1 && !self.field.characteristic_two() {
                        sign_prefix = -sign_prefix;
                    }
                }
            }
        }
        // rows live in the same colevel, one chain degree down
        Ok(IntMatrix::from_triplets(level.dim(), level.dim(), triplets))
    }

    /// Package the structure maps as a plain cosimplicial module (for the
    /// generic identity verifier).
    pub fn as_cosimplicial(&self) -> Result<CosimplicialModule, CoalgebraError> {
        let ranks: Vec<usize> = (0..=self.bound).map(|k| self.dim(k)).collect();
        Ok(CosimplicialModule::new(ranks, self.cofaces.clone(), self.codegens.clone())?)
    }
}

/// Koszul sign of sorting tensor factors listed at `positions` (a
/// permutation of `0..len`) into increasing position order.
fn interleave_sign(positions: &[usize], cells: &[CellRef], field: Field) -> i64 {
    if field.characteristic_two() {
        return 1;
    }
    let mut sign = 1i64;
    for i in 0..positions.len() {
        for j in i + 1..positions.len() {
            if positions[i] > positions[j]
                && cells[i].degree % 2 == 1
                && cells[j].degree % 2 == 1
            {
                sign = -sign;
            }
        }
    }
    sign
}
