//! Chains of partitions: the simplices of the pointed simplicial set `P(n)`.

use super::partition::{enumerate_partitions_with_cap, refines, Partition};
use super::perm::Perm;
use super::PosetError;
use std::collections::HashMap;
use std::fmt;

/// A `k`-simplex of `P(n)`: either the basepoint, or a weakly increasing
/// chain `λ_0 ≤ … ≤ λ_k` of partitions of `{1..n}` with `λ_0 = min` and
/// `λ_k = max`. Chains violating the endpoint condition are canonicalized
/// to the basepoint by [`PChain::new`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PChain {
    Basepoint { ground: usize, level: usize },
    Chain { entries: Vec<Partition> },
}

impl PChain {
    /// Canonicalizing constructor. Errors on malformed input (empty entry
    /// list, mixed ground sets, non-chains); returns the basepoint when the
    /// endpoints are not `min` and `max`.
    pub fn new(ground: usize, entries: Vec<Partition>) -> Result<Self, PosetError> {
        if entries.is_empty() {
            return Err(PosetError::InvalidPartition("a chain needs at least one entry".into()));
        }
        for e in &entries {
            if e.ground() != ground {
                return Err(PosetError::GroundMismatch(ground, e.ground()));
            }
        }
        for w in entries.windows(2) {
            if !refines(&w[0], &w[1])? {
                return Err(PosetError::NotAChain);
            }
        }
        if !entries[0].is_min() || !entries.last().unwrap().is_max() {
            return Ok(PChain::Basepoint { ground, level: entries.len() - 1 });
        }
        Ok(PChain::Chain { entries })
    }

    pub fn basepoint(ground: usize, level: usize) -> Self {
        PChain::Basepoint { ground, level }
    }

    pub fn ground(&self) -> usize {
        match self {
            PChain::Basepoint { ground, .. } => *ground,
            PChain::Chain { entries } => entries[0].ground(),
        }
    }

    pub fn level(&self) -> usize {
        match self {
            PChain::Basepoint { level, .. } => *level,
            PChain::Chain { entries } => entries.len() - 1,
        }
    }

    pub fn is_basepoint(&self) -> bool {
        matches!(self, PChain::Basepoint { .. })
    }

    pub fn entries(&self) -> Option<&[Partition]> {
        match self {
            PChain::Basepoint { .. } => None,
            PChain::Chain { entries } => Some(entries),
        }
    }

    pub fn entry(&self, j: usize) -> Option<&Partition> {
        self.entries().and_then(|e| e.get(j))
    }

    /// Degenerate iff two consecutive entries coincide (for a weakly
    /// increasing chain this is equivalent to any two entries coinciding).
    /// The basepoint counts as degenerate in every positive level.
    pub fn is_degenerate(&self) -> bool {
        match self {
            PChain::Basepoint { level, .. } => *level > 0,
            PChain::Chain { entries } => entries.windows(2).any(|w| w[0] == w[1]),
        }
    }

    /// Face map `d_i`: remove the `i`-th entry and canonicalize.
    pub fn face(&self, i: usize) -> Result<PChain, PosetError> {
        let level = self.level();
        if level == 0 || i > level {
            return Err(PosetError::IndexOutOfRange { index: i, level });
        }
        match self {
            PChain::Basepoint { ground, .. } => Ok(PChain::Basepoint { ground: *ground, level: level - 1 }),
            PChain::Chain { entries } => {
                let mut shorter = entries.clone();
                shorter.remove(i);
                PChain::new(self.ground(), shorter)
            }
        }
    }

    /// Degeneracy map `s_j`: repeat the `j`-th entry.
    pub fn degeneracy(&self, j: usize) -> Result<PChain, PosetError> {
        let level = self.level();
        if j > level {
            return Err(PosetError::IndexOutOfRange { index: j, level });
        }
        match self {
            PChain::Basepoint { ground, .. } => Ok(PChain::Basepoint { ground: *ground, level: level + 1 }),
            PChain::Chain { entries } => {
                let mut longer = entries.clone();
                longer.insert(j, entries[j].clone());
                PChain::new(self.ground(), longer)
            }
        }
    }

    /// The `Σ_n`-action: apply `σ` elementwise to every block of every
    /// entry, then canonicalize. The basepoint is fixed.
    pub fn act(&self, sigma: &Perm) -> Result<PChain, PosetError> {
        if sigma.degree() != self.ground() {
            return Err(PosetError::NotAPermutation(self.ground()));
        }
        match self {
            PChain::Basepoint { .. } => Ok(self.clone()),
            PChain::Chain { entries } => {
                let relabeled = entries.iter().map(|p| p.relabel(sigma.images())).collect();
                PChain::new(self.ground(), relabeled)
            }
        }
    }

    /// Canonical representative of the `Σ_n`-orbit of `self`, together with
    /// a permutation carrying `self` onto it. Deterministic: the minimum
    /// under the derived chain order, with the lexicographically least
    /// transporter.
    pub fn orbit_rep(&self) -> (PChain, Perm) {
        let n = self.ground();
        let mut best: Option<(PChain, Perm)> = None;
        for sigma in Perm::all(n) {
            let image = self.act(&sigma).expect("valid permutation");
            match &best {
                Some((b, _)) if *b <= image => {}
                _ => best = Some((image, sigma)),
            }
        }
        best.expect("nonempty symmetric group")
    }

    /// The subgroup of `Σ_n` fixing every entry of the chain, by direct
    /// enumeration. Intended for small `n`.
    pub fn stabilizer(&self) -> Vec<Perm> {
        Perm::all(self.ground())
            .into_iter()
            .filter(|s| self.act(s).expect("valid permutation") == *self)
            .collect()
    }
}

impl fmt::Display for PChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PChain::Basepoint { .. } => write!(f, "*"),
            PChain::Chain { entries } => {
                let parts: Vec<String> = entries.iter().map(|p| p.to_string()).collect();
                write!(f, "{}", parts.join(" ≤ "))
            }
        }
    }
}

/// The non-basepoint `k`-simplices of `P(n)` in a deterministic order, with
/// the basepoint carried explicitly.
#[derive(Debug, Clone)]
pub struct SimplexTable {
    pub ground: usize,
    pub level: usize,
    pub chains: Vec<PChain>,
    pub basepoint: PChain,
    index: HashMap<PChain, usize>,
}

impl SimplexTable {
    /// Rebuild a table from an explicit chain list (kept in the given
    /// order); used to present relabeled copies of `P(n)_k`.
    pub fn from_chains(ground: usize, level: usize, chains: Vec<PChain>) -> Self {
        let index = chains.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
        SimplexTable { ground, level, chains, basepoint: PChain::basepoint(ground, level), index }
    }

    pub fn len(&self) -> usize {
        self.chains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }

    /// Position of a non-basepoint chain in the table.
    pub fn position(&self, chain: &PChain) -> Option<usize> {
        self.index.get(chain).copied()
    }
}

/// Enumerate `P(n)_k`: all non-basepoint `k`-simplices (plus the explicit
/// basepoint marker). With `nondegenerate_only`, only strictly increasing
/// chains are returned.
pub fn simplices(
    n: usize,
    k: usize,
    nondegenerate_only: bool,
    cap: usize,
) -> Result<SimplexTable, PosetError> {
    let parts = enumerate_partitions_with_cap(n, cap)?;
    let count = parts.len();
    let min_idx = 0usize;
    let max_idx = count - 1;
    debug_assert!(parts[min_idx].is_min() && parts[max_idx].is_max());

    // successors[i] = indices j with parts[i] <= parts[j] (strict when
    // enumerating nondegenerate chains only)
    let mut successors: Vec<Vec<usize>> = vec![Vec::new(); count];
    for i in 0..count {
        for j in 0..count {
            if (!nondegenerate_only || i != j) && refines(&parts[i], &parts[j])? {
                successors[i].push(j);
            }
        }
    }

    let mut chains = Vec::new();
    let mut stack = vec![min_idx];
    collect_chains(&parts, &successors, max_idx, k, &mut stack, &mut chains)?;

    let index = chains.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
    Ok(SimplexTable {
        ground: n,
        level: k,
        chains,
        basepoint: PChain::basepoint(n, k),
        index,
    })
}

fn collect_chains(
    parts: &[Partition],
    successors: &[Vec<usize>],
    max_idx: usize,
    k: usize,
    stack: &mut Vec<usize>,
    out: &mut Vec<PChain>,
) -> Result<(), PosetError> {
    if stack.len() == k + 1 {
        if *stack.last().unwrap() == max_idx {
            let entries = stack.iter().map(|&i| parts[i].clone()).collect();
            let chain = PChain::new(parts[0].ground(), entries)?;
            debug_assert!(!chain.is_basepoint());
            out.push(chain);
        }
        return Ok(());
    }
    let last = *stack.last().unwrap();
    for &next in &successors[last] {
        stack.push(next);
        collect_chains(parts, successors, max_idx, k, stack, out)?;
        stack.pop();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::DEFAULT_SIMPLEX_CAP;

    fn table(n: usize, k: usize, nondeg: bool) -> SimplexTable {
        simplices(n, k, nondeg, DEFAULT_SIMPLEX_CAP).unwrap()
    }

    /// Independent chain counter: entries of the k-th power of the zeta
    /// matrix count multichains with fixed endpoints.
    fn zeta_power_count(n: usize, k: usize) -> u64 {
        let parts = enumerate_partitions_with_cap(n, DEFAULT_SIMPLEX_CAP).unwrap();
        let m = parts.len();
        let mut zeta = vec![vec![0u64; m]; m];
        for i in 0..m {
            for j in 0..m {
                if refines(&parts[i], &parts[j]).unwrap() {
                    zeta[i][j] = 1;
                }
            }
        }
        let mut acc: Vec<u64> = (0..m).map(|j| u64::from(j == 0)).collect();
        for _ in 0..k {
            let mut next = vec![0u64; m];
            for i in 0..m {
                if acc[i] == 0 {
                    continue;
                }
                for j in 0..m {
                    next[j] += acc[i] * zeta[i][j];
                }
            }
            acc = next;
        }
        acc[m - 1]
    }

    #[test]
    fn counts_match_zeta_oracle() {
        for n in 1..=5 {
            for k in 0..=n + 1 {
                let expected = zeta_power_count(n, k);
                assert_eq!(table(n, k, false).len() as u64, expected, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn spec_small_cases() {
        assert_eq!(table(2, 1, true).len(), 1);
        assert_eq!(table(1, 0, true).len(), 1);
        assert_eq!(table(2, 0, true).len(), 0);
        let t = table(3, 2, true);
        assert_eq!(t.len(), 3);
        for c in &t.chains {
            let mid = c.entry(1).unwrap();
            assert_eq!(mid.block_count(), 2);
        }
    }

    #[test]
    fn degenerate_chains_included_without_filter() {
        // P(3)_2 has 5 non-basepoint simplices: middle entry arbitrary.
        let t = table(3, 2, false);
        assert_eq!(t.len(), 5);
        assert_eq!(t.chains.iter().filter(|c| c.is_degenerate()).count(), 2);
    }

    #[test]
    fn constructor_canonicalizes_to_basepoint() {
        let bad = PChain::new(3, vec![Partition::max(3)]).unwrap();
        assert!(bad.is_basepoint());
        let good = PChain::new(1, vec![Partition::min(1)]).unwrap();
        assert!(!good.is_basepoint());
        let out_of_order = PChain::new(
            3,
            vec![Partition::max(3), Partition::min(3)],
        );
        assert!(matches!(out_of_order, Err(PosetError::NotAChain)));
    }

    #[test]
    fn face_and_degeneracy_spec_examples() {
        let lam = Partition::from_blocks(3, vec![vec![1, 2], vec![3]]).unwrap();
        let c = PChain::new(3, vec![Partition::min(3), lam, Partition::max(3)]).unwrap();
        let d1 = c.face(1).unwrap();
        assert_eq!(d1, PChain::new(3, vec![Partition::min(3), Partition::max(3)]).unwrap());
        assert!(c.face(0).unwrap().is_basepoint());
        let edge = PChain::new(3, vec![Partition::min(3), Partition::max(3)]).unwrap();
        let s0 = edge.degeneracy(0).unwrap();
        assert!(s0.is_degenerate());
        assert_eq!(s0.level(), 2);
        assert_eq!(s0.entry(0), s0.entry(1));
        assert!(matches!(edge.face(2), Err(PosetError::IndexOutOfRange { .. })));
    }

    #[test]
    fn simplicial_identities_exhaustive_small() {
        for n in 1..=4 {
            for k in 1..=n + 1 {
                let t = table(n, k, false);
                let mut cells = t.chains.clone();
                cells.push(t.basepoint.clone());
                for c in &cells {
                    // d_i d_j = d_{j-1} d_i for i < j
                    if k >= 2 {
                        for j in 1..=k {
                            for i in 0..j {
                                let lhs = c.face(j).unwrap().face(i).unwrap();
                                let rhs = c.face(i).unwrap().face(j - 1).unwrap();
                                assert_eq!(lhs, rhs, "d_i d_j at n={n} k={k} i={i} j={j}");
                            }
                        }
                    }
                    // s_i s_j = s_{j+1} s_i for i <= j
                    for j in 0..=k {
                        for i in 0..=j {
                            let lhs = c.degeneracy(j).unwrap().degeneracy(i).unwrap();
                            let rhs = c.degeneracy(i).unwrap().degeneracy(j + 1).unwrap();
                            assert_eq!(lhs, rhs);
                        }
                    }
                    // mixed identities
                    for j in 0..=k {
                        let sj = c.degeneracy(j).unwrap();
                        assert_eq!(sj.face(j).unwrap(), *c);
                        assert_eq!(sj.face(j + 1).unwrap(), *c);
                        for i in 0..=k + 1 {
                            if i < j {
                                assert_eq!(
                                    sj.face(i).unwrap(),
                                    c.face(i).unwrap().degeneracy(j - 1).unwrap()
                                );
                            } else if i > j + 1 && k >= 1 {
                                assert_eq!(
                                    sj.face(i).unwrap(),
                                    c.face(i - 1).unwrap().degeneracy(j).unwrap()
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn action_spec_examples() {
        let c = PChain::new(2, vec![Partition::min(2), Partition::max(2)]).unwrap();
        for sigma in Perm::all(2) {
            assert_eq!(c.act(&sigma).unwrap(), c);
        }
        let lam = Partition::from_blocks(3, vec![vec![1, 3], vec![2]]).unwrap();
        let chain = PChain::new(3, vec![Partition::min(3), lam, Partition::max(3)]).unwrap();
        let swapped = chain.act(&Perm::transposition(3, 1, 2)).unwrap();
        let expect_mid = Partition::from_blocks(3, vec![vec![2, 3], vec![1]]).unwrap();
        assert_eq!(swapped.entry(1).unwrap(), &expect_mid);
        assert!(chain.act(&Perm::identity(2)).is_err());
    }

    #[test]
    fn action_commutes_with_faces_and_degeneracies() {
        for n in 2..=4 {
            for k in 1..=3 {
                let t = table(n, k, false);
                for c in &t.chains {
                    for sigma in Perm::all(n) {
                        for i in 0..=k {
                            assert_eq!(
                                c.act(&sigma).unwrap().face(i).unwrap(),
                                c.face(i).unwrap().act(&sigma).unwrap()
                            );
                            assert_eq!(
                                c.act(&sigma).unwrap().degeneracy(i).unwrap(),
                                c.degeneracy(i).unwrap().act(&sigma).unwrap()
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn action_is_group_action() {
        let t = table(3, 2, false);
        for c in &t.chains {
            assert_eq!(c.act(&Perm::identity(3)).unwrap(), *c);
            for s in Perm::all(3) {
                for u in Perm::all(3) {
                    assert_eq!(
                        c.act(&u).unwrap().act(&s).unwrap(),
                        c.act(&s.compose(&u)).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn display_format() {
        let lam = Partition::from_blocks(3, vec![vec![1, 2], vec![3]]).unwrap();
        let c = PChain::new(3, vec![Partition::min(3), lam, Partition::max(3)]).unwrap();
        assert_eq!(c.to_string(), "min ≤ {1 2|3} ≤ max");
        assert_eq!(PChain::basepoint(3, 2).to_string(), "*");
    }
}
