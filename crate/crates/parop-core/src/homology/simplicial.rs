//! Generic finite pointed simplicial sets.
//!
//! A set is presented by its nondegenerate non-basepoint cells per level
//! together with their faces; degenerate cells are carried formally as a
//! nondegenerate base plus a degeneracy word in normal form (strictly
//! decreasing indices), so all simplicial identities involving degeneracies
//! hold by construction. The face identities on the generating cells are
//! machine-checked when the set is built.

use super::HomologyError;
use crate::poset::{simplices, PChain, Perm};
use serde::Deserialize;
use std::collections::HashMap;

/// A cell of the full simplicial set: the basepoint, or a degeneracy word
/// applied to a nondegenerate generator. `word` is strictly decreasing; an
/// empty word denotes the generator itself.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Cell {
    Basepoint,
    Of { base_level: usize, base_index: usize, word: Vec<usize> },
}

impl Cell {
    pub fn generator(level: usize, index: usize) -> Self {
        Cell::Of { base_level: level, base_index: index, word: Vec::new() }
    }

    pub fn is_nondegenerate(&self) -> bool {
        matches!(self, Cell::Of { word, .. } if word.is_empty())
    }

    pub fn level(&self) -> Option<usize> {
        match self {
            Cell::Basepoint => None,
            Cell::Of { base_level, word, .. } => Some(base_level + word.len()),
        }
    }
}

/// A finite pointed simplicial set with all simplicial identities verified
/// on construction. `faces[k][cell][i]` is `d_i` of the `cell`-th
/// nondegenerate `k`-cell, which may be the basepoint, a nondegenerate cell
/// or a formal degeneracy.
#[derive(Debug, Clone)]
pub struct PointedSimplicialSet {
    bound: usize,
    cell_counts: Vec<usize>,
    faces: Vec<Vec<Vec<Cell>>>,
    names: Option<Vec<Vec<String>>>,
}

impl PointedSimplicialSet {
    /// Build from nondegenerate cells and their faces and verify the face
    /// identities `d_i d_j = d_{j-1} d_i` (i < j) on every generator. The
    /// top stored level must consist of degenerate cells only (i.e. carry no
    /// generators), so that the set is honestly bounded.
    pub fn new(
        cell_counts: Vec<usize>,
        faces: Vec<Vec<Vec<Cell>>>,
        names: Option<Vec<Vec<String>>>,
    ) -> Result<Self, HomologyError> {
        if cell_counts.is_empty() {
            return Err(HomologyError::Malformed("need at least level 0".into()));
        }
        let bound = cell_counts.len() - 1;
        if faces.len() != cell_counts.len() {
            return Err(HomologyError::Malformed("face table level count mismatch".into()));
        }
        if !faces[0].is_empty() && !faces[0].iter().all(|f| f.is_empty()) {
            return Err(HomologyError::Malformed("0-cells have no faces".into()));
        }
        if *cell_counts.last().unwrap() != 0 {
            return Err(HomologyError::Malformed(
                "top stored level must contain no nondegenerate cells".into(),
            ));
        }
        for k in 1..=bound {
            if faces[k].len() != cell_counts[k] {
                return Err(HomologyError::Malformed(format!(
                    "level {k}: {} cells but {} face rows",
                    cell_counts[k],
                    faces[k].len()
                )));
            }
            for (idx, cell_faces) in faces[k].iter().enumerate() {
                if cell_faces.len() != k + 1 {
                    return Err(HomologyError::Malformed(format!(
                        "cell {idx} at level {k} has {} faces",
                        cell_faces.len()
                    )));
                }
                for face in cell_faces {
                    if let Some(l) = face.level() {
                        if l + 1 != k {
                            return Err(HomologyError::Malformed(format!(
                                "face of a level-{k} cell lands in level {l}"
                            )));
                        }
                        if let Cell::Of { base_level, base_index, .. } = face {
                            if *base_level >= cell_counts.len()
                                || *base_index >= cell_counts[*base_level]
                            {
                                return Err(HomologyError::Malformed(
                                    "face references a missing cell".into(),
                                ));
                            }
                        }
                    }
                }
            }
        }
        let s = PointedSimplicialSet { bound, cell_counts, faces, names };
        s.verify_face_identities()?;
        Ok(s)
    }

    fn verify_face_identities(&self) -> Result<(), HomologyError> {
        for k in 2..=self.bound {
            for idx in 0..self.cell_counts[k] {
                let cell = Cell::generator(k, idx);
                for j in 1..=k {
                    for i in 0..j {
                        let lhs = self.face_of(&self.face_of(&cell, j), i);
                        let rhs = self.face_of(&self.face_of(&cell, i), j - 1);
                        if lhs != rhs {
                            return Err(HomologyError::SimplicialIdentity(format!(
                                "d_{i} d_{j} != d_{} d_{i} at level {k} cell {idx}",
                                j - 1
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    /// Number of nondegenerate non-basepoint cells at `level`.
    pub fn nondegenerate_count(&self, level: usize) -> usize {
        self.cell_counts.get(level).copied().unwrap_or(0)
    }

    pub fn name(&self, level: usize, index: usize) -> Option<&str> {
        self.names.as_ref().map(|n| n[level][index].as_str())
    }

    /// Face `d_i`, valid for any cell (formal degeneracies included), via
    /// the simplicial identities.
    pub fn face_of(&self, cell: &Cell, i: usize) -> Cell {
        match cell {
            Cell::Basepoint => Cell::Basepoint,
            Cell::Of { base_level, base_index, word } => {
                if word.is_empty() {
                    self.faces[*base_level][*base_index][i].clone()
                } else {
                    // outermost degeneracy is the largest index
                    let j = word[0];
                    let rest =
                        Cell::Of { base_level: *base_level, base_index: *base_index, word: word[1..].to_vec() };
                    if i < j {
                        self.degeneracy_of(&self.face_of(&rest, i), j - 1)
                    } else if i == j || i == j + 1 {
                        rest
                    } else {
                        self.degeneracy_of(&self.face_of(&rest, i - 1), j)
                    }
                }
            }
        }
    }

    /// Degeneracy `s_j` of any cell, in normal form.
    pub fn degeneracy_of(&self, cell: &Cell, j: usize) -> Cell {
        match cell {
            Cell::Basepoint => Cell::Basepoint,
            Cell::Of { base_level, base_index, word } => {
                // push s_j into a strictly decreasing word: indices >= j
                // shift up by one, then j is inserted
                let mut new_word: Vec<usize> =
                    word.iter().map(|&w| if w >= j { w + 1 } else { w }).collect();
                let pos = new_word.iter().position(|&w| w < j).unwrap_or(new_word.len());
                new_word.insert(pos, j);
                Cell::Of { base_level: *base_level, base_index: *base_index, word: new_word }
            }
        }
    }

    /// Count the cells of the full simplicial set at `level` (basepoint
    /// excluded): nondegenerate generators plus formal degeneracies.
    pub fn total_cells(&self, level: usize) -> u64 {
        let mut total = 0u64;
        for base in 0..=level.min(self.bound) {
            let words = binomial(level as u64, (level - base) as u64);
            total += self.cell_counts[base] as u64 * words;
        }
        total
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// The pointed simplicial set `P(n)` materialized up to level `n` (the top
/// stored level carries no nondegenerate chains, which certifies the
/// dimension bound). Cells at level `k` are the nondegenerate chains in the
/// deterministic order of [`simplices`].
pub fn par_complex(n: usize, cap: usize) -> Result<PointedSimplicialSet, HomologyError> {
    let bound = n;
    let mut tables = Vec::with_capacity(bound + 1);
    for k in 0..=bound {
        tables.push(simplices(n, k, true, cap)?);
    }
    build_from_chain_tables(n, &tables)
}

/// As [`par_complex`] but with every chain relabeled through `sigma` before
/// the tables are assembled. Homology must be invariant under this.
pub fn par_complex_relabeled(
    n: usize,
    cap: usize,
    sigma: &Perm,
) -> Result<PointedSimplicialSet, HomologyError> {
    let bound = n;
    let mut tables = Vec::with_capacity(bound + 1);
    for k in 0..=bound {
        let t = simplices(n, k, true, cap)?;
        let mut chains: Vec<PChain> = t
            .chains
            .iter()
            .map(|c| c.act(sigma).expect("valid permutation"))
            .collect();
        chains.sort();
        tables.push(crate::poset::SimplexTable::from_chains(n, k, chains));
    }
    build_from_chain_tables(n, &tables)
}

fn build_from_chain_tables(
    n: usize,
    tables: &[crate::poset::SimplexTable],
) -> Result<PointedSimplicialSet, HomologyError> {
    let bound = tables.len() - 1;
    let cell_counts: Vec<usize> = tables.iter().map(|t| t.len()).collect();
    let mut faces: Vec<Vec<Vec<Cell>>> = vec![Vec::new(); bound + 1];
    for k in 1..=bound {
        let mut level_faces = Vec::with_capacity(tables[k].len());
        for chain in &tables[k].chains {
            let mut cell_faces = Vec::with_capacity(k + 1);
            for i in 0..=k {
                let f = chain.face(i)?;
                // faces of strictly increasing chains stay strictly
                // increasing, so the target is a generator or the basepoint
                debug_assert!(f.is_basepoint() || !f.is_degenerate());
                let cell = match tables[k - 1].position(&f) {
                    Some(idx) => Cell::generator(k - 1, idx),
                    None => Cell::Basepoint,
                };
                cell_faces.push(cell);
            }
            level_faces.push(cell_faces);
        }
        faces[k] = level_faces;
    }
    let names = if n <= 5 {
        Some(tables.iter().map(|t| t.chains.iter().map(|c| c.to_string()).collect()).collect())
    } else {
        None
    };
    PointedSimplicialSet::new(cell_counts, faces, names)
}

/// The simplicial `d`-sphere with a single nondegenerate non-basepoint cell
/// (in dimension `d`), all of whose faces are the basepoint.
pub fn sphere(d: usize) -> PointedSimplicialSet {
    let bound = d + 1;
    let mut cell_counts = vec![0usize; bound + 1];
    cell_counts[d] = 1;
    let mut faces: Vec<Vec<Vec<Cell>>> = vec![Vec::new(); bound + 1];
    if d >= 1 {
        faces[d] = vec![vec![Cell::Basepoint; d + 1]];
    } else {
        faces[0] = vec![Vec::new()];
    }
    let mut names = vec![Vec::new(); bound + 1];
    names[d] = vec![format!("e{d}")];
    PointedSimplicialSet::new(cell_counts, faces, Some(names)).expect("sphere is well-formed")
}

#[derive(Debug, Deserialize)]
struct SimplicialSetDocument {
    cells: HashMap<String, Vec<String>>,
    #[serde(default)]
    faces: HashMap<String, HashMap<String, Vec<String>>>,
    #[serde(default)]
    degeneracies: HashMap<String, DegeneracyAlias>,
    basepoint: String,
}

#[derive(Debug, Deserialize)]
struct DegeneracyAlias {
    base: String,
    word: Vec<usize>,
}

/// Parse a pointed simplicial set from its JSON document:
///
/// ```json
/// { "cells": {"0": ["x"], "1": ["e"]},
///   "faces": {"1": {"e": ["pt", "x"]}},
///   "degeneracies": {},
///   "basepoint": "pt" }
/// ```
///
/// `cells` lists the nondegenerate non-basepoint cells per level; `faces`
/// maps each cell of level ≥ 1 to its `k+1` faces, each a cell name, the
/// basepoint name, or an alias declared in `degeneracies` (`{"name":
/// {"base": "x", "word": [0]}}`).
pub fn parse_simplicial_set(json: &str) -> Result<PointedSimplicialSet, HomologyError> {
    let doc: SimplicialSetDocument = serde_json::from_str(json)
        .map_err(|e| HomologyError::InvalidInput(format!("simplicial set JSON: {e}")))?;
    let mut levels: Vec<usize> = doc
        .cells
        .keys()
        .map(|k| {
            k.parse::<usize>()
                .map_err(|_| HomologyError::InvalidInput(format!("bad level key {k:?}")))
        })
        .collect::<Result<_, _>>()?;
    levels.sort_unstable();
    let top = levels.last().copied().unwrap_or(0);
    let bound = top + 1;

    let mut names: Vec<Vec<String>> = vec![Vec::new(); bound + 1];
    let mut position: HashMap<String, (usize, usize)> = HashMap::new();
    for (key, cells) in &doc.cells {
        let level: usize = key.parse().unwrap();
        for name in cells {
            if name == &doc.basepoint {
                return Err(HomologyError::InvalidInput(
                    "the basepoint must not be listed among the cells".into(),
                ));
            }
            if position.insert(name.clone(), (level, names[level].len())).is_some() {
                return Err(HomologyError::InvalidInput(format!("cell {name:?} listed twice")));
            }
            names[level].push(name.clone());
        }
    }

    let resolve = |name: &str, expected_level: usize| -> Result<Cell, HomologyError> {
        if name == doc.basepoint {
            return Ok(Cell::Basepoint);
        }
        if let Some((l, i)) = position.get(name) {
            if *l != expected_level {
                return Err(HomologyError::InvalidInput(format!(
                    "face {name:?} has level {l}, expected {expected_level}"
                )));
            }
            return Ok(Cell::generator(*l, *i));
        }
        if let Some(alias) = doc.degeneracies.get(name) {
            let (l, i) = position.get(&alias.base).ok_or_else(|| {
                HomologyError::InvalidInput(format!("degeneracy base {:?} unknown", alias.base))
            })?;
            let mut word = alias.word.clone();
            word.sort_unstable_by(|a, b| b.cmp(a));
            if l + word.len() != expected_level {
                return Err(HomologyError::InvalidInput(format!(
                    "degenerate face {name:?} has wrong level"
                )));
            }
            return Ok(Cell::Of { base_level: *l, base_index: *i, word });
        }
        Err(HomologyError::InvalidInput(format!("unknown cell {name:?}")))
    };

    let mut faces: Vec<Vec<Vec<Cell>>> = vec![Vec::new(); bound + 1];
    for (level, level_names) in names.iter().enumerate() {
        if level == 0 {
            faces[0] = level_names.iter().map(|_| Vec::new()).collect();
            continue;
        }
        let level_faces = doc.faces.get(&level.to_string());
        let mut rows = Vec::with_capacity(level_names.len());
        for name in level_names {
            let entry = level_faces.and_then(|m| m.get(name)).ok_or_else(|| {
                HomologyError::InvalidInput(format!("missing faces for cell {name:?}"))
            })?;
            if entry.len() != level + 1 {
                return Err(HomologyError::InvalidInput(format!(
                    "cell {name:?} needs {} faces",
                    level + 1
                )));
            }
            let mut row = Vec::with_capacity(level + 1);
            for face_name in entry {
                row.push(resolve(face_name, level - 1)?);
            }
            rows.push(row);
        }
        faces[level] = rows;
    }

    let cell_counts: Vec<usize> = names.iter().map(Vec::len).collect();
    PointedSimplicialSet::new(cell_counts, faces, Some(names))
}
