//! Set partitions of `{1..n}` in canonical form, the refinement order, and
//! exhaustive enumeration.

use super::PosetError;
use std::fmt;

/// Default cap for [`enumerate_partitions`]. `B_9 = 21147` is the largest
/// Bell number we enumerate without an explicit opt-in.
pub const DEFAULT_PARTITION_CAP: usize = 9;

/// Default cap for full simplex tables of `P(n)`.
pub const DEFAULT_SIMPLEX_CAP: usize = 7;

/// A set partition of `{1..n}` in canonical form: blocks are sorted
/// ascending internally and ordered by least element, so equal partitions
/// have identical representations and derived `Ord` is a total order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    ground: usize,
    blocks: Vec<Vec<u32>>,
}

impl Partition {
    /// Build a partition from blocks, validating that they are nonempty,
    /// pairwise disjoint and cover `{1..n}` exactly. The input block order
    /// is irrelevant; the result is canonical.
    pub fn from_blocks(ground: usize, blocks: Vec<Vec<u32>>) -> Result<Self, PosetError> {
        let mut seen = vec![false; ground + 1];
        let mut canonical: Vec<Vec<u32>> = Vec::with_capacity(blocks.len());
        for mut block in blocks {
            if block.is_empty() {
                return Err(PosetError::InvalidPartition("empty block".into()));
            }
            block.sort_unstable();
            for &x in &block {
                if x == 0 || x as usize > ground {
                    return Err(PosetError::InvalidPartition(format!(
                        "element {x} outside 1..={ground}"
                    )));
                }
                if seen[x as usize] {
                    return Err(PosetError::InvalidPartition(format!("element {x} repeated")));
                }
                seen[x as usize] = true;
            }
            canonical.push(block);
        }
        if seen[1..].iter().any(|&s| !s) {
            return Err(PosetError::InvalidPartition("blocks do not cover the ground set".into()));
        }
        canonical.sort_unstable();
        Ok(Partition { ground, blocks: canonical })
    }

    /// The minimal partition: one block `{1..n}`.
    pub fn min(ground: usize) -> Self {
        Partition { ground, blocks: vec![(1..=ground as u32).collect()] }
    }

    /// The maximal partition: all singletons.
    pub fn max(ground: usize) -> Self {
        Partition { ground, blocks: (1..=ground as u32).map(|x| vec![x]).collect() }
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_min(&self) -> bool {
        self.blocks.len() == 1
    }

    pub fn is_max(&self) -> bool {
        self.blocks.len() == self.ground
    }

    /// Block index (in canonical order) containing `x`.
    pub fn block_of(&self, x: u32) -> usize {
        self.blocks
            .iter()
            .position(|b| b.binary_search(&x).is_ok())
            .expect("element in ground set")
    }

    /// Relabel every element through `images` (1-indexed: element `x` maps
    /// to `images[x-1]`) and re-canonicalize.
    pub(crate) fn relabel(&self, images: &[u32]) -> Partition {
        let mut blocks: Vec<Vec<u32>> = self
            .blocks
            .iter()
            .map(|b| {
                let mut nb: Vec<u32> = b.iter().map(|&x| images[x as usize - 1]).collect();
                nb.sort_unstable();
                nb
            })
            .collect();
        blocks.sort_unstable();
        Partition { ground: self.ground, blocks }
    }

    /// Restriction to a subset `t` of the ground set, standardized through
    /// the order-preserving bijection `t ≅ {1..|t|}`. Every block must be
    /// contained in or disjoint from `t`; otherwise `None`.
    pub fn restrict_standardized(&self, t: &[u32]) -> Option<Partition> {
        let pos = |x: u32| t.binary_search(&x).ok().map(|i| i as u32 + 1);
        let mut blocks = Vec::new();
        for b in &self.blocks {
            let inside: Vec<u32> = b.iter().filter_map(|&x| pos(x)).collect();
            if inside.is_empty() {
                continue;
            }
            if inside.len() != b.len() {
                return None;
            }
            blocks.push(inside);
        }
        blocks.sort_unstable();
        Some(Partition { ground: t.len(), blocks })
    }

    /// Quotient along a finer partition: if every block of `self` is a
    /// union of blocks of `lambda`, the result is the induced partition of
    /// the block indices `{1..lambda.block_count()}`; otherwise `None`.
    pub fn quotient_by(&self, lambda: &Partition) -> Option<Partition> {
        if self.ground != lambda.ground() || !refines(self, lambda).ok()? {
            return None;
        }
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                let mut indices: Vec<u32> =
                    b.iter().map(|&x| lambda.block_of(x) as u32 + 1).collect();
                indices.sort_unstable();
                indices.dedup();
                indices
            })
            .collect();
        Partition::from_blocks(lambda.block_count(), blocks).ok()
    }

    /// Inverse of [`restrict_standardized`]: push a partition of `{1..|t|}`
    /// forward along the order-preserving bijection into the subset `t`.
    pub fn expand_into(&self, t: &[u32]) -> Vec<Vec<u32>> {
        debug_assert_eq!(self.ground, t.len());
        self.blocks
            .iter()
            .map(|b| b.iter().map(|&x| t[x as usize - 1]).collect())
            .collect()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_min() && self.ground > 1 {
            return write!(f, "min");
        }
        if self.is_max() && self.ground > 1 {
            return write!(f, "max");
        }
        let body = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
            .collect::<Vec<_>>()
            .join("|");
        write!(f, "{{{body}}}")
    }
}

/// Tests `coarse ≤ fine`: every block of `coarse` is a union of blocks of
/// `fine`. This is the partial order in which `min ≤ λ ≤ max` for all `λ`.
pub fn refines(coarse: &Partition, fine: &Partition) -> Result<bool, PosetError> {
    if coarse.ground() != fine.ground() {
        return Err(PosetError::GroundMismatch(coarse.ground(), fine.ground()));
    }
    // fine covers the same ground, so it suffices that each fine block sits
    // inside a single coarse block.
    for block in fine.blocks() {
        let home = coarse.block_of(block[0]);
        if block[1..].iter().any(|&x| coarse.block_of(x) != home) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Bell number `B_n` (number of set partitions of an `n`-set).
pub fn bell_number(n: usize) -> u64 {
    // Bell triangle.
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            let y = *next.last().unwrap() + x;
            next.push(y);
        }
        row = next;
    }
    row[0]
}

/// Every set partition of `{1..n}`, each exactly once, in the order induced
/// by lexicographic restricted-growth strings. The first entry is `min`
/// (one block) and the last is `max` (singletons).
pub fn enumerate_partitions(n: usize) -> Result<Vec<Partition>, PosetError> {
    enumerate_partitions_with_cap(n, DEFAULT_PARTITION_CAP)
}

/// As [`enumerate_partitions`] with an explicit cap.
pub fn enumerate_partitions_with_cap(n: usize, cap: usize) -> Result<Vec<Partition>, PosetError> {
    if n == 0 {
        return Err(PosetError::InvalidPartition("n must be positive".into()));
    }
    if n > cap {
        return Err(PosetError::CapExceeded { n, cap });
    }
    let mut out = Vec::with_capacity(bell_number(n) as usize);
    // Restricted growth strings: a[0] = 0, a[i] <= max(a[0..i]) + 1.
    let mut rgs = vec![0u32; n];
    loop {
        out.push(rgs_to_partition(n, &rgs));
        // lexicographic successor
        let mut i = n;
        let mut advanced = false;
        while i > 1 {
            i -= 1;
            let bound = rgs[..i].iter().copied().max().unwrap() + 1;
            if rgs[i] < bound {
                rgs[i] += 1;
                rgs[i + 1..].iter_mut().for_each(|x| *x = 0);
                advanced = true;
                break;
            }
        }
        if !advanced {
            break;
        }
    }
    Ok(out)
}

fn rgs_to_partition(n: usize, rgs: &[u32]) -> Partition {
    let classes = rgs.iter().copied().max().unwrap() as usize + 1;
    let mut blocks: Vec<Vec<u32>> = vec![Vec::new(); classes];
    for (i, &c) in rgs.iter().enumerate() {
        blocks[c as usize].push(i as u32 + 1);
    }
    // RGS classes are already ordered by least element.
    Partition { ground: n, blocks }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: count partitions by direct recursive insertion
    /// (element n joins an existing block or starts a new one).
    fn enumerate_recursive(n: usize) -> Vec<Partition> {
        fn go(n: usize, k: usize, acc: &mut Vec<Vec<Vec<u32>>>, cur: &mut Vec<Vec<u32>>) {
            if k > n {
                acc.push(cur.clone());
                return;
            }
            for i in 0..cur.len() {
                cur[i].push(k as u32);
                go(n, k + 1, acc, cur);
                cur[i].pop();
            }
            cur.push(vec![k as u32]);
            go(n, k + 1, acc, cur);
            cur.pop();
        }
        let mut acc = Vec::new();
        go(n, 2, &mut acc, &mut vec![vec![1]]);
        acc.into_iter().map(|b| Partition::from_blocks(n, b).unwrap()).collect()
    }

    #[test]
    fn enumerate_n1() {
        let parts = enumerate_partitions(1).unwrap();
        assert_eq!(parts, vec![Partition::min(1)]);
        assert_eq!(parts[0], Partition::max(1));
    }

    #[test]
    fn enumerate_counts_match_recursive_oracle() {
        for n in 1..=6 {
            let fast = enumerate_partitions(n).unwrap();
            let mut slow = enumerate_recursive(n);
            assert_eq!(fast.len(), slow.len(), "n = {n}");
            assert_eq!(fast.len() as u64, bell_number(n));
            let mut sorted = fast.clone();
            sorted.sort();
            slow.sort();
            assert_eq!(sorted, slow);
        }
        // frozen from the recursive oracle
        assert_eq!(enumerate_partitions(3).unwrap().len(), 5);
        assert_eq!(enumerate_partitions(4).unwrap().len(), 15);
    }

    #[test]
    fn enumerate_endpoints_and_uniqueness() {
        for n in 1..=6 {
            let parts = enumerate_partitions(n).unwrap();
            assert_eq!(parts.first().unwrap(), &Partition::min(n));
            assert_eq!(parts.last().unwrap(), &Partition::max(n));
            let mut dedup = parts.clone();
            dedup.sort();
            dedup.dedup();
            assert_eq!(dedup.len(), parts.len());
        }
    }

    #[test]
    fn enumerate_cap() {
        assert!(matches!(
            enumerate_partitions_with_cap(5, 4),
            Err(PosetError::CapExceeded { n: 5, cap: 4 })
        ));
    }

    #[test]
    fn refines_basics() {
        let n = 3;
        let min = Partition::min(n);
        let max = Partition::max(n);
        let ab_c = Partition::from_blocks(3, vec![vec![1, 2], vec![3]]).unwrap();
        let ac_b = Partition::from_blocks(3, vec![vec![1, 3], vec![2]]).unwrap();
        assert!(refines(&min, &max).unwrap());
        assert!(!refines(&ab_c, &ac_b).unwrap());
        assert!(refines(&ab_c, &max).unwrap());
        assert!(!refines(&max, &ab_c).unwrap());
    }

    #[test]
    fn refines_ground_mismatch() {
        let a = Partition::min(2);
        let b = Partition::min(3);
        assert!(matches!(refines(&a, &b), Err(PosetError::GroundMismatch(2, 3))));
    }

    #[test]
    fn refines_is_partial_order() {
        let parts = enumerate_partitions(4).unwrap();
        for a in &parts {
            assert!(refines(a, a).unwrap());
            assert!(refines(&Partition::min(4), a).unwrap());
            assert!(refines(a, &Partition::max(4)).unwrap());
            for b in &parts {
                if refines(a, b).unwrap() && refines(b, a).unwrap() {
                    assert_eq!(a, b);
                }
                for c in &parts {
                    if refines(a, b).unwrap() && refines(b, c).unwrap() {
                        assert!(refines(a, c).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn invalid_partitions_rejected() {
        assert!(Partition::from_blocks(3, vec![vec![1, 2]]).is_err());
        assert!(Partition::from_blocks(3, vec![vec![1, 2], vec![2, 3]]).is_err());
        assert!(Partition::from_blocks(3, vec![vec![1, 2], vec![], vec![3]]).is_err());
        assert!(Partition::from_blocks(3, vec![vec![1, 2], vec![3, 4]]).is_err());
    }

    #[test]
    fn canonical_form_is_input_order_independent() {
        let a = Partition::from_blocks(4, vec![vec![3], vec![4, 1], vec![2]]).unwrap();
        let b = Partition::from_blocks(4, vec![vec![1, 4], vec![2], vec![3]]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.blocks(), &[vec![1, 4], vec![2], vec![3]]);
    }

    #[test]
    fn display_format() {
        let p = Partition::from_blocks(3, vec![vec![1, 2], vec![3]]).unwrap();
        assert_eq!(p.to_string(), "{1 2|3}");
        assert_eq!(Partition::min(3).to_string(), "min");
        assert_eq!(Partition::max(3).to_string(), "max");
    }
}
