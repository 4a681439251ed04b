//! Grafting an outer chain with inner chains along a fixed middle partition,
//! and the inverse decomposition (ungrafting).
//!
//! A 2-simplex `α = (min ≤ λ ≤ max)` of `P(k)` with `λ = {T_1, …, T_n}`
//! splits a `(p+q)`-chain into an outer `p`-chain on the blocks and inner
//! `q`-chains inside each block. Inner chains live on `{1..|T_i|}` through
//! the order-preserving bijection with `T_i`.

use super::chain::PChain;
use super::partition::Partition;
use super::perm::Perm;
use super::PosetError;

/// Replace each block `S` of a partition of `{1..n}` by the union of the
/// subsets `T_s`, `s ∈ S`.
fn expand_partition(part: &Partition, blocks: &[Vec<u32>], ground: usize) -> Partition {
    let expanded: Vec<Vec<u32>> = part
        .blocks()
        .iter()
        .map(|s| {
            let mut merged: Vec<u32> =
                s.iter().flat_map(|&i| blocks[i as usize - 1].iter().copied()).collect();
            merged.sort_unstable();
            merged
        })
        .collect();
    Partition::from_blocks(ground, expanded).expect("expanded blocks partition the ground set")
}

/// Quotient a partition of `{1..k}` whose blocks are unions of the blocks of
/// `lambda`, producing a partition of the block indices `{1..n}`.
fn quotient_partition(part: &Partition, lambda: &Partition) -> Partition {
    let quotient: Vec<Vec<u32>> = part
        .blocks()
        .iter()
        .map(|b| {
            let mut indices: Vec<u32> =
                b.iter().map(|&x| lambda.block_of(x) as u32 + 1).collect();
            indices.dedup();
            indices.sort_unstable();
            indices.dedup();
            indices
        })
        .collect();
    Partition::from_blocks(lambda.block_count(), quotient)
        .expect("quotient blocks partition the block indices")
}

fn middle_of(alpha: &PChain) -> Result<&Partition, PosetError> {
    if alpha.level() != 2 {
        return Err(PosetError::LevelMismatch(format!(
            "alpha must be a 2-simplex, got level {}",
            alpha.level()
        )));
    }
    alpha.entry(1).ok_or(PosetError::Basepoint)
}

/// Graft `gamma ∈ P(n)_p` with `betas = (β_1, …, β_n)`, `β_i ∈ P(|T_i|)_q`,
/// along the middle partition `{T_1, …, T_n}` of `alpha`. The result is the
/// `(p+q)`-chain whose first `p` entries are the expanded entries of `gamma`
/// and whose remaining entries assemble the entries of the `β_i`. A
/// basepoint `gamma` or `β_i` yields the basepoint.
pub fn graft(alpha: &PChain, gamma: &PChain, betas: &[PChain]) -> Result<PChain, PosetError> {
    let lambda = middle_of(alpha)?;
    let k = alpha.ground();
    let n = lambda.block_count();
    if gamma.ground() != n {
        return Err(PosetError::ArityMismatch(format!(
            "gamma on {} elements, alpha middle has {} blocks",
            gamma.ground(),
            n
        )));
    }
    if betas.len() != n {
        return Err(PosetError::ArityMismatch(format!(
            "{} inner chains for {} blocks",
            betas.len(),
            n
        )));
    }
    let q = betas[0].level();
    for (i, beta) in betas.iter().enumerate() {
        if beta.level() != q {
            return Err(PosetError::LevelMismatch(format!(
                "inner chains at mixed levels {q} and {}",
                beta.level()
            )));
        }
        if beta.ground() != lambda.blocks()[i].len() {
            return Err(PosetError::ArityMismatch(format!(
                "beta_{} on {} elements, block has {}",
                i + 1,
                beta.ground(),
                lambda.blocks()[i].len()
            )));
        }
    }
    let p = gamma.level();
    if gamma.is_basepoint() || betas.iter().any(|b| b.is_basepoint()) {
        return Ok(PChain::basepoint(k, p + q));
    }

    let mut entries: Vec<Partition> = Vec::with_capacity(p + q + 1);
    let outer = gamma.entries().expect("non-basepoint");
    for entry in &outer[..p] {
        entries.push(expand_partition(entry, lambda.blocks(), k));
    }
    for m in 0..=q {
        let mut blocks: Vec<Vec<u32>> = Vec::new();
        for (i, beta) in betas.iter().enumerate() {
            let entry = beta.entry(m).expect("non-basepoint");
            blocks.extend(entry.expand_into(&lambda.blocks()[i]));
        }
        entries.push(
            Partition::from_blocks(k, blocks).expect("assembled blocks partition the ground set"),
        );
    }
    PChain::new(k, entries)
}

/// The `alpha`-component of the decomposition map: split `gamma_prime ∈
/// P(k)_{p+q}` as `graft(alpha, gamma, betas)` if its `p`-th entry equals
/// the middle partition of `alpha`, and return `None` otherwise (including
/// for a basepoint input). `graft` and `ungraft` are mutually inverse where
/// defined.
pub fn ungraft(
    gamma_prime: &PChain,
    alpha: &PChain,
    p: usize,
    q: usize,
) -> Result<Option<(PChain, Vec<PChain>)>, PosetError> {
    let lambda = middle_of(alpha)?;
    if gamma_prime.level() != p + q {
        return Err(PosetError::LevelMismatch(format!(
            "chain at level {}, expected p+q = {}",
            gamma_prime.level(),
            p + q
        )));
    }
    if gamma_prime.ground() != alpha.ground() {
        return Err(PosetError::GroundMismatch(gamma_prime.ground(), alpha.ground()));
    }
    let entries = match gamma_prime.entries() {
        None => return Ok(None),
        Some(e) => e,
    };
    if &entries[p] != lambda {
        return Ok(None);
    }
    let n = lambda.block_count();
    let outer: Vec<Partition> =
        entries[..=p].iter().map(|e| quotient_partition(e, lambda)).collect();
    let gamma = PChain::new(n, outer)?;
    debug_assert!(!gamma.is_basepoint());
    let mut betas = Vec::with_capacity(n);
    for block in lambda.blocks() {
        let inner: Vec<Partition> = entries[p..]
            .iter()
            .map(|e| {
                e.restrict_standardized(block)
                    .expect("later entries refine the middle partition")
            })
            .collect();
        let beta = PChain::new(block.len(), inner)?;
        debug_assert!(!beta.is_basepoint());
        betas.push(beta);
    }
    Ok(Some((gamma, betas)))
}

/// For `σ ∈ Σ_k` and a partition `λ = {T_1, …, T_n}` of `{1..k}`: the
/// induced permutation of block indices (`i ↦` position of `σ(T_i)` among
/// the blocks of `σλ`) together with, for each block, the standardized
/// within-block permutation.
pub fn block_translation(lambda: &Partition, sigma: &Perm) -> (Perm, Vec<Perm>) {
    let image = lambda.relabel(sigma.images());
    let n = lambda.block_count();
    let mut outer = vec![0u32; n];
    let mut inner = Vec::with_capacity(n);
    for (i, block) in lambda.blocks().iter().enumerate() {
        let mapped: Vec<u32> = block.iter().map(|&x| sigma.apply(x)).collect();
        let mut sorted = mapped.clone();
        sorted.sort_unstable();
        let target = image.blocks().iter().position(|b| *b == sorted).expect("image block");
        outer[i] = target as u32 + 1;
        let tau: Vec<u32> = mapped
            .iter()
            .map(|x| sorted.binary_search(x).unwrap() as u32 + 1)
            .collect();
        inner.push(Perm::from_images(tau).expect("within-block relabeling"));
    }
    (Perm::from_images(outer).expect("block relabeling"), inner)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::simplices;

    fn two_simplex(k: usize, lambda: Partition) -> PChain {
        PChain::new(k, vec![Partition::min(k), lambda, Partition::max(k)]).unwrap()
    }

    fn edge(n: usize) -> PChain {
        PChain::new(n, vec![Partition::min(n), Partition::max(n)]).unwrap()
    }

    #[test]
    fn graft_hand_example() {
        // alpha with middle {{1,2},{3}}; outer edge in P(2); inner edge on
        // {1,2} and the degenerate edge on {3}
        let lam = Partition::from_blocks(3, vec![vec![1, 2], vec![3]]).unwrap();
        let alpha = two_simplex(3, lam.clone());
        let beta2 = PChain::new(1, vec![Partition::min(1), Partition::min(1)]).unwrap();
        let grafted = graft(&alpha, &edge(2), &[edge(2), beta2]).unwrap();
        assert_eq!(grafted, two_simplex(3, lam));
    }

    #[test]
    fn graft_unit_like_case() {
        // p = 0: the outer chain is the unique 0-simplex of P(1)
        let k = 4;
        let alpha = two_simplex(k, Partition::min(k));
        let gamma0 = PChain::new(1, vec![Partition::min(1)]).unwrap();
        let t = simplices(k, 2, false, 7).unwrap();
        for beta in &t.chains {
            let grafted = graft(&alpha, &gamma0, std::slice::from_ref(beta)).unwrap();
            assert_eq!(&grafted, beta);
        }
    }

    #[test]
    fn ungraft_hand_example() {
        let lam = Partition::from_blocks(3, vec![vec![1, 2], vec![3]]).unwrap();
        let gp = two_simplex(3, lam.clone());
        let alpha = two_simplex(3, lam);
        let (gamma, betas) = ungraft(&gp, &alpha, 1, 1).unwrap().unwrap();
        assert_eq!(gamma, edge(2));
        assert_eq!(betas[0], edge(2));
        assert_eq!(betas[1].level(), 1);
        assert!(betas[1].is_degenerate());

        let other = two_simplex(3, Partition::from_blocks(3, vec![vec![1, 3], vec![2]]).unwrap());
        assert!(ungraft(&gp, &other, 1, 1).unwrap().is_none());
    }

    #[test]
    fn ungraft_at_degenerate_alpha_max() {
        // alpha degenerate with middle = max forces fully degenerate betas
        let k = 3;
        let alpha = two_simplex(k, Partition::max(k));
        let t = simplices(k, 2, false, 7).unwrap();
        for gp in &t.chains {
            let p = 2;
            let res = ungraft(gp, &alpha, p, 0).unwrap();
            // entry p is the last entry = max, so the split is always defined
            let (gamma, betas) = res.unwrap();
            assert_eq!(&gamma, gp);
            assert!(betas.iter().all(|b| b.level() == 0 && b.ground() == 1));
        }
    }

    #[test]
    fn level_mismatch_errors() {
        let lam = Partition::from_blocks(3, vec![vec![1, 2], vec![3]]).unwrap();
        let alpha = two_simplex(3, lam);
        let gp = edge(3);
        assert!(matches!(
            ungraft(&gp, &alpha, 1, 1),
            Err(PosetError::LevelMismatch(_))
        ));
        assert!(matches!(
            graft(&alpha, &edge(2), &[edge(2)]),
            Err(PosetError::ArityMismatch(_))
        ));
        let mixed = [edge(2), PChain::new(1, vec![Partition::min(1)]).unwrap()];
        assert!(matches!(graft(&alpha, &edge(2), &mixed), Err(PosetError::LevelMismatch(_))));
    }

    #[test]
    fn roundtrip_exhaustive_small() {
        // graft ∘ ungraft = id on the domain of definition, and
        // ungraft ∘ graft = id, for all alpha in P(k)_2 and levels p+q <= 3
        for k in 1..=4 {
            let alphas = simplices(k, 2, false, 7).unwrap();
            for (p, q) in [(0, 1), (1, 1), (1, 2), (2, 1), (0, 2), (2, 0), (3, 0), (0, 3)] {
                let total = simplices(k, p + q, false, 7).unwrap();
                for alpha in &alphas.chains {
                    let lambda = alpha.entry(1).unwrap().clone();
                    let n = lambda.block_count();
                    for gp in &total.chains {
                        if let Some((gamma, betas)) = ungraft(gp, alpha, p, q).unwrap() {
                            assert_eq!(gamma.level(), p);
                            assert_eq!(gamma.ground(), n);
                            let back = graft(alpha, &gamma, &betas).unwrap();
                            assert_eq!(&back, gp, "k={k} p={p} q={q} alpha={alpha}");
                        }
                    }
                    // ungraft ∘ graft = id over all valid (gamma, betas)
                    if p + q > 3 {
                        continue;
                    }
                    let gammas = simplices(n, p, false, 7).unwrap();
                    let beta_tables: Vec<Vec<PChain>> = lambda
                        .blocks()
                        .iter()
                        .map(|b| simplices(b.len(), q, false, 7).unwrap().chains)
                        .collect();
                    if beta_tables.iter().any(|t| t.is_empty()) {
                        continue;
                    }
                    for gamma in &gammas.chains {
                        let mut counters = vec![0usize; n];
                        loop {
                            let betas: Vec<PChain> = counters
                                .iter()
                                .zip(&beta_tables)
                                .map(|(&c, t)| t[c].clone())
                                .collect();
                            let gp = graft(alpha, gamma, &betas).unwrap();
                            let (g2, b2) = ungraft(&gp, alpha, p, q).unwrap().unwrap();
                            assert_eq!(&g2, gamma);
                            assert_eq!(b2, betas);
                            // odometer
                            let mut pos = 0;
                            loop {
                                if pos == n {
                                    break;
                                }
                                counters[pos] += 1;
                                if counters[pos] < beta_tables[pos].len() {
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
            }
        }
    }

    #[test]
    fn ungraft_equivariance_exhaustive() {
        // ungraft(σγ', σα, p, q) is the σ-translate of ungraft(γ', α, p, q)
        for k in 2..=4 {
            let alphas = simplices(k, 2, false, 7).unwrap();
            let (p, q) = (1, 1);
            let total = simplices(k, p + q, false, 7).unwrap();
            for alpha in &alphas.chains {
                let lambda = alpha.entry(1).unwrap().clone();
                for gp in &total.chains {
                    for sigma in Perm::all(k) {
                        let lhs = ungraft(
                            &gp.act(&sigma).unwrap(),
                            &alpha.act(&sigma).unwrap(),
                            p,
                            q,
                        )
                        .unwrap();
                        let rhs = ungraft(gp, alpha, p, q).unwrap().map(|(gamma, betas)| {
                            let (outer, inner) = block_translation(&lambda, &sigma);
                            let mut moved = vec![None; betas.len()];
                            for (i, beta) in betas.iter().enumerate() {
                                let target = outer.apply(i as u32 + 1) as usize - 1;
                                moved[target] = Some(beta.act(&inner[i]).unwrap());
                            }
                            (
                                gamma.act(&outer).unwrap(),
                                moved.into_iter().map(Option::unwrap).collect::<Vec<_>>(),
                            )
                        });
                        assert_eq!(lhs, rhs, "k={k} sigma={sigma} alpha={alpha} gp={gp}");
                    }
                }
            }
        }
    }
}
