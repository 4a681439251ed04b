//! The pairing maps `m_{p,q}` between composed cobar colevels, and the
//! verification sweep for the monoid identities they satisfy: the gluing
//! square, associativity, the unit laws, and equivariance.

use super::psi::psi_map;
use super::PairingError;
use crate::homology::IntMatrix;
use crate::poset::{graft, simplices, ungraft, PChain, Partition, Perm, SimplexTable};
use crate::report::Report;
use crate::symseq::{compose_indexing, ComposedIndex, WedgeSeq};
use rand::Rng;

/// `m_{p,q}` at a fixed arity: a map from the composed indexing of two
/// cobar colevels to functions on the `(p+q)`-simplices, presented as an
/// integer matrix over the enumerated bases. Built through the
/// decomposition table: the matrix entry at `(γ', (α; γ; β⃗))` is 1 exactly
/// when `γ'` ungrafts at `α` into `(γ, β⃗)`.
#[derive(Debug, Clone)]
pub struct PairingMap {
    pub arity: usize,
    pub p: usize,
    pub q: usize,
    pub source: ComposedIndex,
    pub target: SimplexTable,
    pub matrix: IntMatrix,
}

pub(super) fn level_tables(k: usize, level: usize, cap: usize) -> Result<Vec<SimplexTable>, PairingError> {
    (1..=k).map(|m| simplices(m, level, false, cap).map_err(Into::into)).collect()
}

pub(super) fn composed_source(
    k: usize,
    p: usize,
    q: usize,
    cap: usize,
) -> Result<ComposedIndex, PairingError> {
    let seqs = [WedgeSeq::cobar_level(p, k, cap)?, WedgeSeq::cobar_level(q, k, cap)?];
    Ok(compose_indexing(&seqs, k, cap)?)
}

pub fn m_pq(k: usize, p: usize, q: usize, cap: usize) -> Result<PairingMap, PairingError> {
    let source = composed_source(k, p, q, cap)?;
    let target = simplices(k, p + q, false, cap)?;
    let psi = psi_map(k, p, q, cap)?;
    let gamma_tables = level_tables(k, p, cap)?;
    let beta_tables = level_tables(k, q, cap)?;
    let mut triplets = Vec::new();
    for (row, _) in psi.totals.chains.iter().enumerate() {
        for (a_idx, alpha) in psi.alphas.chains.iter().enumerate() {
            let Some((gamma, betas)) = &psi.entries[row][a_idx] else { continue };
            let n = gamma.ground();
            let mut choices = Vec::with_capacity(1 + betas.len());
            choices.push(
                gamma_tables[n - 1].position(gamma).expect("outer chain indexes its table"),
            );
            for b in betas {
                choices
                    .push(beta_tables[b.ground() - 1].position(b).expect("inner chain indexed"));
            }
            if let Some(col) = source.position(alpha, &choices) {
                triplets.push((row, col, 1i64));
            }
        }
    }
    let matrix = IntMatrix::from_triplets(target.len(), source.len(), triplets);
    Ok(PairingMap { arity: k, p, q, source, target, matrix })
}

/// `id ∘ d^i`: apply the `i`-th coface to every inner factor. Matrix from
/// the `(p, q)` source to the `(p, q+1)` source.
pub(super) fn inner_coface_matrix(
    src: &ComposedIndex,
    dst: &ComposedIndex,
    i: usize,
    src_inner: &[SimplexTable],
    dst_inner: &[SimplexTable],
) -> Result<IntMatrix, PairingError> {
    let mut triplets = Vec::new();
    'target: for t in 0..dst.len() {
        let alpha = dst.alpha_of(t).clone();
        let slots = dst.slots_of(t);
        let choices = dst.choices_of(t);
        let mut new_choices = Vec::with_capacity(choices.len());
        new_choices.push(choices[0]);
        for (slot, &c) in slots[1..].iter().zip(&choices[1..]) {
            let chain = &dst_inner[slot.arity - 1].chains[c];
            let f = chain.face(i)?;
            match src_inner[slot.arity - 1].position(&f) {
                Some(pos) => new_choices.push(pos),
                None => continue 'target,
            }
        }
        if let Some(s) = src.position(&alpha, &new_choices) {
            triplets.push((t, s, 1i64));
        }
    }
    Ok(IntMatrix::from_triplets(dst.len(), src.len(), triplets))
}

/// `d^i ∘ id`: apply the `i`-th coface to the outer factor. Matrix from the
/// `(p, q)` source to the `(p+1, q)` source.
pub(super) fn outer_coface_matrix(
    src: &ComposedIndex,
    dst: &ComposedIndex,
    i: usize,
    src_outer: &[SimplexTable],
    dst_outer: &[SimplexTable],
) -> Result<IntMatrix, PairingError> {
    let mut triplets = Vec::new();
    for t in 0..dst.len() {
        let alpha = dst.alpha_of(t).clone();
        let slots = dst.slots_of(t);
        let choices = dst.choices_of(t);
        let chain = &dst_outer[slots[0].arity - 1].chains[choices[0]];
        let f = chain.face(i)?;
        let Some(pos) = src_outer[slots[0].arity - 1].position(&f) else { continue };
        let mut new_choices = choices.to_vec();
        new_choices[0] = pos;
        if let Some(s) = src.position(&alpha, &new_choices) {
            triplets.push((t, s, 1i64));
        }
    }
    Ok(IntMatrix::from_triplets(dst.len(), src.len(), triplets))
}

fn degenerate_unit_chain(p: usize) -> PChain {
    PChain::new(1, vec![Partition::min(1); p + 1]).expect("valid degenerate chain")
}

/// Verify, as exact matrix equalities at every arity `k ≤ k_max`:
/// the gluing square `m_{p,q+1}∘(id∘d⁰) = m_{p+1,q}∘(d^{p+1}∘id)`,
/// associativity of the `m` family on threefold composites, and the unit
/// laws against the coaugmentation (left unit `(d⁰)^p`, right unit the
/// composite of top cofaces).
pub fn verify_monoid(k_max: usize, level_max: usize, cap: usize) -> Result<Report, PairingError> {
    let mut report = Report::new();
    for k in 1..=k_max {
        // squares
        for p in 0..=level_max {
            for q in 0..=level_max - p {
                let src = composed_source(k, p, q, cap)?;
                let src_q1 = composed_source(k, p, q + 1, cap)?;
                let src_p1 = composed_source(k, p + 1, q, cap)?;
                let tp = level_tables(k, p, cap)?;
                let tq = level_tables(k, q, cap)?;
                let tq1 = level_tables(k, q + 1, cap)?;
                let tp1 = level_tables(k, p + 1, cap)?;
                let inner0 = inner_coface_matrix(&src, &src_q1, 0, &tq, &tq1)?;
                let outer_top = outer_coface_matrix(&src, &src_p1, p + 1, &tp, &tp1)?;
                let lhs = m_pq(k, p, q + 1, cap)?.matrix.mul(&inner0);
                let rhs = m_pq(k, p + 1, q, cap)?.matrix.mul(&outer_top);
                report.check(
                    lhs == rhs,
                    "m_{p,q+1}(id∘d^0) = m_{p+1,q}(d^{p+1}∘id)",
                    format!("k={k}, p={p}, q={q}"),
                );
            }
        }
        // unit laws
        for p in 0..=level_max {
            for q in 0..=level_max - p {
                report.absorb(unit_laws(k, p, q, cap)?);
            }
        }
        // associativity on threefold composites
        for p in 0..=level_max {
            for q in 0..=level_max - p {
                for r in 0..=level_max - p - q {
                    report.absorb(associativity(k, p, q, r, cap)?);
                }
            }
        }
    }
    Ok(report)
}

/// Left unit: composing with the coaugmentation in the outer slot is the
/// `p`-fold bottom coface. Right unit: composing with it in every inner
/// slot is the `q`-fold top coface.
fn unit_laws(k: usize, p: usize, q: usize, cap: usize) -> Result<Report, PairingError> {
    let mut report = Report::new();
    let m = m_pq(k, p, q, cap)?;
    let alpha_min = PChain::new(
        k,
        vec![Partition::min(k), Partition::min(k), Partition::max(k)],
    )?;
    let alpha_max = PChain::new(
        k,
        vec![Partition::min(k), Partition::max(k), Partition::max(k)],
    )?;
    // left: u^p ∘ id on C^q[k]
    let source_q = simplices(k, q, false, cap)?;
    let up = degenerate_unit_chain(p);
    for beta in &source_q.chains {
        let image = graft(&alpha_min, &up, std::slice::from_ref(beta))?;
        // (d^0)^p: the unique chain with p prepended minima
        let mut entries = vec![Partition::min(k); p];
        entries.extend(beta.entries().unwrap().iter().cloned());
        let expected = PChain::new(k, entries)?;
        report.check(
            image == expected && m.target.position(&image).is_some(),
            "m_{p,q}(u^p∘id) = (d^0)^p",
            format!("k={k}, p={p}, q={q}, beta={beta}"),
        );
    }
    // right: id ∘ u^q on C^p[k]
    let source_p = simplices(k, p, false, cap)?;
    let uq: Vec<PChain> = (0..k).map(|_| degenerate_unit_chain(q)).collect();
    for gamma in &source_p.chains {
        let image = graft(&alpha_max, gamma, &uq)?;
        let mut entries = gamma.entries().unwrap().to_vec();
        entries.extend(std::iter::repeat(Partition::max(k)).take(q));
        let expected = PChain::new(k, entries)?;
        // and the top-coface description: removing the last q entries
        // recovers gamma
        let mut recovered = image.clone();
        for _ in 0..q {
            recovered = recovered.face(recovered.level())?;
        }
        report.check(
            image == expected && recovered == *gamma,
            "m_{p,q}(id∘u^q) = d^{top} composite",
            format!("k={k}, p={p}, q={q}, gamma={gamma}"),
        );
    }
    Ok(report)
}

/// `m_{p+q,r}∘(m_{p,q}∘id) = m_{p,q+r}∘(id∘m_{q,r})`, checked pointwise on
/// the threefold composed basis (each route sends a basis element to a
/// single indicator, so pointwise equality of the image chains is the
/// matrix identity).
fn associativity(
    k: usize,
    p: usize,
    q: usize,
    r: usize,
    cap: usize,
) -> Result<Report, PairingError> {
    let mut report = Report::new();
    let seqs = [
        WedgeSeq::cobar_level(p, k, cap)?,
        WedgeSeq::cobar_level(q, k, cap)?,
        WedgeSeq::cobar_level(r, k, cap)?,
    ];
    let triple = compose_indexing(&seqs, k, cap)?;
    let tp = level_tables(k, p, cap)?;
    let tq = level_tables(k, q, cap)?;
    let tr = level_tables(k, r, cap)?;
    for e in 0..triple.len() {
        let alpha3 = triple.alpha_of(e);
        let entries = alpha3.entries().expect("non-basepoint");
        let (lam1, lam2) = (&entries[1], &entries[2]);
        let slots = triple.slots_of(e);
        let choices = triple.choices_of(e);
        let a = lam1.block_count();
        let gamma = tp[slots[0].arity - 1].chains[choices[0]].clone();
        let b_chains: Vec<PChain> = (0..a)
            .map(|i| tq[slots[1 + i].arity - 1].chains[choices[1 + i]].clone())
            .collect();
        let h_chains: Vec<PChain> = (0..lam2.block_count())
            .map(|j| {
                let slot = &slots[1 + a + j];
                tr[slot.arity - 1].chains[choices[1 + a + j]].clone()
            })
            .collect();

        // left route: (m_{p,q} ∘ id) then m_{p+q,r}
        let mm = lam2.block_count();
        let tau = PChain::new(
            mm,
            vec![
                Partition::min(mm),
                lam1.quotient_by(lam2).expect("lam1 is coarser"),
                Partition::max(mm),
            ],
        )?;
        let alpha_l =
            PChain::new(k, vec![Partition::min(k), lam2.clone(), Partition::max(k)])?;
        let inner_l = graft(&tau, &gamma, &b_chains)?;
        let left = graft(&alpha_l, &inner_l, &h_chains)?;

        // right route: (id ∘ m_{q,r}) then m_{p,q+r}
        let alpha_r =
            PChain::new(k, vec![Partition::min(k), lam1.clone(), Partition::max(k)])?;
        let mut inners_r = Vec::with_capacity(a);
        for (i, w) in lam1.blocks().iter().enumerate() {
            let restricted = lam2.restrict_standardized(w).expect("lam2 refines lam1");
            let rho = PChain::new(
                w.len(),
                vec![Partition::min(w.len()), restricted, Partition::max(w.len())],
            )?;
            // the lam2-blocks inside w, in canonical order
            let hs: Vec<PChain> = lam2
                .blocks()
                .iter()
                .enumerate()
                .filter(|(_, b)| w.binary_search(&b[0]).is_ok())
                .map(|(j, _)| h_chains[j].clone())
                .collect();
            inners_r.push(graft(&rho, &b_chains[i], &hs)?);
        }
        let right = graft(&alpha_r, &gamma, &inners_r)?;

        report.check(
            left == right,
            "m_{p+q,r}(m_{p,q}∘id) = m_{p,q+r}(id∘m_{q,r})",
            format!("k={k}, p={p}, q={q}, r={r}, elem={e}"),
        );
    }
    Ok(report)
}

/// Equivariance sweep: the decomposition table and the pairing matrices are
/// checked against the given permutations (conjugation on both sides).
pub fn equivariance_report(
    k: usize,
    p: usize,
    q: usize,
    sigmas: &[Perm],
    cap: usize,
) -> Result<Report, PairingError> {
    let mut report = Report::new();
    let psi = psi_map(k, p, q, cap)?;
    // pointwise translate identity for the decomposition map
    for sigma in sigmas {
        let mut ok = true;
        'outer: for (g_idx, gp) in psi.totals.chains.iter().enumerate() {
            for (a_idx, alpha) in psi.alphas.chains.iter().enumerate() {
                let lambda = alpha.entry(1).unwrap();
                let lhs = ungraft(&gp.act(sigma)?, &alpha.act(sigma)?, p, q)?;
                let rhs = match &psi.entries[g_idx][a_idx] {
                    None => None,
                    Some((gamma, betas)) => {
                        let (outer, inner) = crate::poset::block_translation(lambda, sigma);
                        let mut moved = vec![None; betas.len()];
                        for (i, beta) in betas.iter().enumerate() {
                            let target = outer.apply(i as u32 + 1) as usize - 1;
                            moved[target] = Some(beta.act(&inner[i])?);
                        }
                        Some((
                            gamma.act(&outer)?,
                            moved.into_iter().map(Option::unwrap).collect::<Vec<_>>(),
                        ))
                    }
                };
                if lhs != rhs {
                    ok = false;
                    break 'outer;
                }
            }
        }
        report.check(ok, "Psi equivariance", format!("k={k}, p={p}, q={q}, sigma={sigma}"));
    }
    // matrix conjugation for m_{p,q}
    let m = m_pq(k, p, q, cap)?;
    for sigma in sigmas {
        let src_perm = {
            let mut triplets = Vec::with_capacity(m.source.len());
            for e in 0..m.source.len() {
                triplets.push((m.source.act(sigma, e)?, e, 1i64));
            }
            IntMatrix::from_triplets(m.source.len(), m.source.len(), triplets)
        };
        let tgt_perm = {
            let mut triplets = Vec::with_capacity(m.target.len());
            for (i, c) in m.target.chains.iter().enumerate() {
                let img = m.target.position(&c.act(sigma)?).expect("action permutes");
                triplets.push((img, i, 1i64));
            }
            IntMatrix::from_triplets(m.target.len(), m.target.len(), triplets)
        };
        let lhs = m.matrix.mul(&src_perm);
        let rhs = tgt_perm.mul(&m.matrix);
        report.check(
            lhs == rhs,
            "m_{p,q} equivariance",
            format!("k={k}, p={p}, q={q}, sigma={sigma}"),
        );
    }
    Ok(report)
}

/// Draw `count` permutations of `{1..k}` from a seeded generator.
pub fn seeded_permutations(k: usize, count: usize, seed: u64) -> Vec<Perm> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut images: Vec<u32> = (1..=k as u32).collect();
            for i in (1..images.len()).rev() {
                let j = rng.gen_range(0..=i);
                images.swap(i, j);
            }
            Perm::from_images(images).expect("shuffle is a permutation")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::DEFAULT_SIMPLEX_CAP;

    const CAP: usize = DEFAULT_SIMPLEX_CAP;

    #[test]
    fn m_pq_spec_example_arity_three() {
        // (k,p,q) = (3,1,1) at alpha with middle {{1,2},{3}}: the basis
        // element (alpha; edge; edge, degenerate) maps to the indicator of
        // (min <= {{1,2},{3}} <= max)
        let m = m_pq(3, 1, 1, CAP).unwrap();
        let lam = Partition::from_blocks(3, vec![vec![1, 2], vec![3]]).unwrap();
        let alpha =
            PChain::new(3, vec![Partition::min(3), lam.clone(), Partition::max(3)]).unwrap();
        let gamma = PChain::new(2, vec![Partition::min(2), Partition::max(2)]).unwrap();
        let beta1 = gamma.clone();
        let beta2 = PChain::new(1, vec![Partition::min(1); 2]).unwrap();
        // locate the source element
        let gamma_pos = simplices(2, 1, false, CAP).unwrap().position(&gamma).unwrap();
        let b1 = simplices(2, 1, false, CAP).unwrap().position(&beta1).unwrap();
        let b2 = simplices(1, 1, false, CAP).unwrap().position(&beta2).unwrap();
        let col = m.source.position(&alpha, &[gamma_pos, b1, b2]).unwrap();
        let expected_row = m
            .target
            .position(&PChain::new(3, vec![Partition::min(3), lam, Partition::max(3)]).unwrap())
            .unwrap();
        for row in 0..m.target.len() {
            assert_eq!(m.matrix.entry(row, col), i64::from(row == expected_row));
        }
    }

    #[test]
    fn m_p0_is_the_canonical_identification() {
        // q = 0: inner colevel is the unit, so m_{p,0} must be a bijection
        // of bases
        for k in 1..=3 {
            for p in 0..=2 {
                let m = m_pq(k, p, 0, CAP).unwrap();
                assert_eq!(m.source.len(), m.target.len());
                // every column has exactly one entry and every row is hit
                let mut row_hits = vec![0usize; m.target.len()];
                for row in 0..m.target.len() {
                    for (_, v) in m.matrix.row(row) {
                        assert_eq!(v, 1);
                        row_hits[row] += 1;
                    }
                }
                assert!(row_hits.iter().all(|&h| h == 1));
            }
        }
    }

    #[test]
    fn monoid_identities_small() {
        let report = verify_monoid(3, 3, CAP).unwrap();
        assert!(report.ok(), "violations: {:?}", &report.violations[..report.violations.len().min(5)]);
        assert!(report.checks > 100);
    }

    #[test]
    fn corrupted_psi_breaks_the_square() {
        // replace one m-matrix by a corrupted one and re-run the square
        let k = 3;
        let (p, q) = (1, 1);
        let src = composed_source(k, p, q, CAP).unwrap();
        let src_q1 = composed_source(k, p, q + 1, CAP).unwrap();
        let src_p1 = composed_source(k, p + 1, q, CAP).unwrap();
        let tp = level_tables(k, p, CAP).unwrap();
        let tq = level_tables(k, q, CAP).unwrap();
        let tq1 = level_tables(k, q + 1, CAP).unwrap();
        let tp1 = level_tables(k, p + 1, CAP).unwrap();
        let inner0 = inner_coface_matrix(&src, &src_q1, 0, &tq, &tq1).unwrap();
        let outer_top = outer_coface_matrix(&src, &src_p1, p + 1, &tp, &tp1).unwrap();
        let good = m_pq(k, p, q + 1, CAP).unwrap();
        let rhs = m_pq(k, p + 1, q, CAP).unwrap().matrix.mul(&outer_top);
        // zero out the decomposition data: lhs becomes zero, rhs does not
        let corrupted = IntMatrix::zero(good.matrix.nrows(), good.matrix.ncols());
        let lhs = corrupted.mul(&inner0);
        assert_ne!(lhs, rhs);
    }

    #[test]
    fn equivariance_exhaustive_small() {
        for k in 2..=3 {
            let sigmas = Perm::all(k);
            for (p, q) in [(1, 1), (1, 2)] {
                let report = equivariance_report(k, p, q, &sigmas, CAP).unwrap();
                assert!(report.ok(), "violations: {:?}", report.violations.first());
            }
        }
    }

    #[test]
    fn seeded_permutations_are_deterministic() {
        let a = seeded_permutations(5, 10, 0);
        let b = seeded_permutations(5, 10, 0);
        assert_eq!(a, b);
        let c = seeded_permutations(5, 10, 1);
        assert_ne!(a, c);
    }
}
