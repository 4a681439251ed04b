//! Profiles of partition chains: the nested composition recording how each
//! entry refines the previous one, plus the order of the chain stabilizer.

use super::chain::PChain;
use super::partition::Partition;
use super::PosetError;
use std::collections::HashMap;

/// The profile of a non-basepoint `k`-simplex: `rows[j-1][i-1]` is the
/// number of blocks of `λ_j` inside the `i`-th block of `λ_{j-1}` (canonical
/// block order), for `j = 1..k`. The arity is the sum of the last row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    rows: Vec<Vec<usize>>,
    arity: usize,
    stabilizer_order: u64,
}

impl Profile {
    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    /// The sums `α_j = α_{j,1} + … + α_{j,α_{j-1}}` for `j = 1..k`.
    pub fn alpha_sums(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn level(&self) -> usize {
        self.rows.len()
    }

    pub fn stabilizer_order(&self) -> u64 {
        self.stabilizer_order
    }

    /// For a 2-simplex, the pair `(n, (k_1, …, k_n))`: the number of blocks
    /// of the middle partition and their sizes in canonical order.
    pub fn as_two_level(&self) -> Option<(usize, Vec<usize>)> {
        if self.rows.len() != 2 {
            return None;
        }
        Some((self.rows[0][0], self.rows[1].clone()))
    }
}

/// Profile of a non-basepoint chain, computed under the canonical block
/// ordering; the basepoint is an argument error.
pub fn profile_of(chain: &PChain) -> Result<Profile, PosetError> {
    let entries = chain.entries().ok_or(PosetError::Basepoint)?;
    let mut rows = Vec::with_capacity(entries.len() - 1);
    for j in 1..entries.len() {
        let prev = &entries[j - 1];
        let cur = &entries[j];
        let mut row = vec![0usize; prev.block_count()];
        for block in cur.blocks() {
            row[prev.block_of(block[0])] += 1;
        }
        rows.push(row);
    }
    let arity = chain.ground();
    let full: Vec<u32> = (1..=arity as u32).collect();
    let stabilizer_order = aut_order(entries, 0, &full);
    Ok(Profile { rows, arity, stabilizer_order })
}

/// Order of the subgroup of `Σ_n` fixing every entry of the chain, counted
/// via automorphisms of the level tree: children of a block at level `j`
/// are the blocks of `λ_{j+1}` it contains, and equal standardized subtrees
/// may be permuted freely.
fn aut_order(entries: &[Partition], level: usize, block: &[u32]) -> u64 {
    if level + 1 == entries.len() {
        debug_assert_eq!(block.len(), 1);
        return 1;
    }
    let children: Vec<&Vec<u32>> = entries[level + 1]
        .blocks()
        .iter()
        .filter(|b| block.binary_search(&b[0]).is_ok())
        .collect();
    let mut classes: HashMap<Vec<Partition>, u64> = HashMap::new();
    let mut product = 1u64;
    for child in children {
        let key: Vec<Partition> = entries[level + 1..]
            .iter()
            .map(|p| p.restrict_standardized(child).expect("chain refines its own blocks"))
            .collect();
        *classes.entry(key).or_insert(0) += 1;
        product *= aut_order(entries, level + 1, child);
    }
    for count in classes.values() {
        product *= factorial(*count);
    }
    product
}

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::simplices;

    #[test]
    fn single_refinement_step() {
        for n in 1..=5 {
            let c = PChain::new(n, vec![Partition::min(n), Partition::max(n)]).unwrap();
            let p = profile_of(&c).unwrap();
            assert_eq!(p.rows(), &[vec![n]]);
            assert_eq!(p.arity(), n);
            assert_eq!(p.alpha_sums(), vec![n]);
        }
    }

    #[test]
    fn two_level_profile() {
        let lam = Partition::from_blocks(3, vec![vec![1, 2], vec![3]]).unwrap();
        let c = PChain::new(3, vec![Partition::min(3), lam, Partition::max(3)]).unwrap();
        let p = profile_of(&c).unwrap();
        assert_eq!(p.rows(), &[vec![2], vec![2, 1]]);
        assert_eq!(p.as_two_level(), Some((2, vec![2, 1])));
        assert_eq!(p.arity(), 3);
    }

    #[test]
    fn stabilizer_order_matches_brute_force() {
        // spec case: middle {{1,4},{2,3}} has stabilizer of order 8
        let lam = Partition::from_blocks(4, vec![vec![1, 4], vec![2, 3]]).unwrap();
        let c = PChain::new(4, vec![Partition::min(4), lam, Partition::max(4)]).unwrap();
        let p = profile_of(&c).unwrap();
        assert_eq!(p.rows(), &[vec![2], vec![2, 2]]);
        assert_eq!(p.stabilizer_order(), 8);
        assert_eq!(c.stabilizer().len() as u64, 8);

        for n in 2..=4 {
            for k in 1..=3 {
                let t = simplices(n, k, false, 7).unwrap();
                for chain in &t.chains {
                    let tree = profile_of(chain).unwrap().stabilizer_order();
                    let brute = chain.stabilizer().len() as u64;
                    assert_eq!(tree, brute, "chain {chain}");
                    assert_eq!(factorial(n as u64) % tree, 0);
                }
            }
        }
    }

    #[test]
    fn alpha_sums_nondecreasing_and_end_at_arity() {
        for n in 2..=5 {
            let t = simplices(n, 3, false, 7).unwrap();
            for chain in &t.chains {
                let p = profile_of(chain).unwrap();
                let sums = p.alpha_sums();
                assert!(sums.windows(2).all(|w| w[0] <= w[1]));
                assert_eq!(*sums.last().unwrap(), n);
            }
        }
    }

    #[test]
    fn basepoint_is_an_error() {
        assert!(matches!(
            profile_of(&PChain::basepoint(3, 2)),
            Err(PosetError::Basepoint)
        ));
    }
}
