//! A pointed simplicial set viewed as a diagonal coalgebra: reduced
//! normalized chains with the Alexander–Whitney comultiplication induced by the
//! simplicial diagonal.

use super::CoalgebraError;
use crate::homology::{normalized_chain_complex, Cell, ChainComplex, PointedSimplicialSet};

/// A cell of the reduced normalized chain basis: degree and index within
/// that degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct CellRef {
    pub degree: usize,
    pub index: usize,
}

/// A pointed simplicial set together with its reduced normalized chain
/// complex and the chain-level diagonal. The diagonal of a vertex is
/// grouplike and the iterated diagonal is strictly coassociative; both are
/// checked cellwise on construction.
#[derive(Debug, Clone)]
pub struct DiagonalCoalgebra {
    space: PointedSimplicialSet,
    chains: ChainComplex,
}

impl DiagonalCoalgebra {
    pub fn new(space: PointedSimplicialSet) -> Result<Self, CoalgebraError> {
        let chains = normalized_chain_complex(&space)?;
        let coalgebra = DiagonalCoalgebra { space, chains };
        coalgebra.check_coassociativity()?;
        Ok(coalgebra)
    }

    fn check_coassociativity(&self) -> Result<(), CoalgebraError> {
        for cell in self.cells() {
            // (Δ⊗id)Δ = (id⊗Δ)Δ, cellwise with multiplicities
            let mut left: Vec<(CellRef, CellRef, CellRef)> = Vec::new();
            let mut right: Vec<(CellRef, CellRef, CellRef)> = Vec::new();
            for (a, b) in self.diagonal(cell) {
                for (a1, a2) in self.diagonal(a) {
                    left.push((a1, a2, b));
                }
                for (b1, b2) in self.diagonal(b) {
                    right.push((a, b1, b2));
                }
            }
            left.sort_unstable();
            right.sort_unstable();
            if left != right {
                return Err(CoalgebraError::Invalid(format!(
                    "diagonal not coassociative at cell {cell:?}"
                )));
            }
            if cell.degree == 0 {
                let d = self.diagonal(cell);
                if d != vec![(cell, cell)] {
                    return Err(CoalgebraError::Invalid(format!(
                        "vertex {cell:?} is not grouplike"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn space(&self) -> &PointedSimplicialSet {
        &self.space
    }

    pub fn chains(&self) -> &ChainComplex {
        &self.chains
    }

    pub fn dim(&self, degree: usize) -> usize {
        self.chains.rank(degree)
    }

    pub fn top_degree(&self) -> usize {
        self.chains.top_degree()
    }

    /// All basis cells in a deterministic order (degree, then index).
    pub fn cells(&self) -> Vec<CellRef> {
        (0..=self.top_degree())
            .flat_map(|d| (0..self.dim(d)).map(move |i| CellRef { degree: d, index: i }))
            .collect()
    }

    /// Boundary of a cell in reduced normalized chains.
    pub fn boundary_of(&self, cell: CellRef) -> Vec<(CellRef, i64)> {
        if cell.degree == 0 {
            return Vec::new();
        }
        let b = self.chains.boundary(cell.degree);
        (0..b.nrows())
            .flat_map(|r| {
                b.row(r)
                    .filter(|&(c, _)| c as usize == cell.index)
                    .map(move |(_, v)| (CellRef { degree: cell.degree - 1, index: r }, v))
                    .collect::<Vec<_>>()
            })
            .collect()
    }

    /// The reduced Alexander–Whitney diagonal: the sum of front ⊗ back face
    /// pairs, with degenerate or basepoint faces dropped. No signs.
    pub fn diagonal(&self, cell: CellRef) -> Vec<(CellRef, CellRef)> {
        let m = cell.degree;
        let mut out = Vec::new();
        for i in 0..=m {
            let front = self.front_face(cell, i);
            let back = self.back_face(cell, m - i);
            if let (Some(f), Some(b)) = (front, back) {
                out.push((f, b));
            }
        }
        out
    }

    /// `t`-fold iterated diagonal, as a multiset of `t`-tuples (coefficient
    /// one each; the Alexander–Whitney diagonal carries no signs).
    pub fn iterated_diagonal(&self, cell: CellRef, t: usize) -> Vec<Vec<CellRef>> {
        assert!(t >= 1);
        if t == 1 {
            return vec![vec![cell]];
        }
        let mut out = Vec::new();
        for (a, b) in self.diagonal(cell) {
            for mut rest in self.iterated_diagonal(b, t - 1) {
                let mut tuple = Vec::with_capacity(t);
                tuple.push(a);
                tuple.append(&mut rest);
                out.push(tuple);
            }
        }
        out
    }

    fn front_face(&self, cell: CellRef, i: usize) -> Option<CellRef> {
        let mut c = Cell::generator(cell.degree, cell.index);
        let mut level = cell.degree;
        while level > i {
            c = self.space.face_of(&c, level);
            level -= 1;
        }
        self.as_nondegenerate(&c)
    }

    fn back_face(&self, cell: CellRef, j: usize) -> Option<CellRef> {
        let mut c = Cell::generator(cell.degree, cell.index);
        let mut level = cell.degree;
        while level > j {
            c = self.space.face_of(&c, 0);
            level -= 1;
        }
        self.as_nondegenerate(&c)
    }

    fn as_nondegenerate(&self, c: &Cell) -> Option<CellRef> {
        match c {
            Cell::Of { base_level, base_index, word } if word.is_empty() => {
                Some(CellRef { degree: *base_level, index: *base_index })
            }
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::sphere;

    #[test]
    fn sphere_diagonals() {
        // S^0: the point is grouplike
        let s0 = DiagonalCoalgebra::new(sphere(0)).unwrap();
        let pt = CellRef { degree: 0, index: 0 };
        assert_eq!(s0.diagonal(pt), vec![(pt, pt)]);
        assert_eq!(s0.iterated_diagonal(pt, 3), vec![vec![pt, pt, pt]]);

        // a suspension has trivial reduced diagonal in positive degrees
        for d in 1..=2 {
            let s = DiagonalCoalgebra::new(sphere(d)).unwrap();
            let e = CellRef { degree: d, index: 0 };
            assert!(s.diagonal(e).is_empty());
        }
    }

    #[test]
    fn boundary_reads_the_chain_complex() {
        let s1 = DiagonalCoalgebra::new(sphere(1)).unwrap();
        let e = CellRef { degree: 1, index: 0 };
        assert!(s1.boundary_of(e).is_empty());
        assert_eq!(s1.dim(1), 1);
        assert_eq!(s1.dim(0), 0);
    }
}
