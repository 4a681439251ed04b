//! Integer cochains on the simplices of `P(n)` and their operadic
//! composition along a 2-simplex.
//!
//! The composite pairs the outer cochain with the front quotient of a chain
//! and each inner cochain with a contiguous slice of the corresponding
//! restricted suffix (front/back cup convention, no sign on the map
//! itself). The graded Leibniz rule `δ(f∘g⃗) = (δf)∘g⃗ +
//! (-1)^p Σ_i (-1)^{q_1+…+q_{i-1}} f∘(…, δg_i, …)` is the arbiter for the
//! convention and is checked exactly by [`leibniz_residual`].

use super::PairingError;
use crate::poset::{simplices, ungraft, PChain, Perm, SimplexTable};

/// An integer cochain on the non-basepoint simplices of `P(arity)_level`,
/// in the deterministic order of [`simplices`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cochain {
    pub arity: usize,
    pub level: usize,
    pub values: Vec<i64>,
}

impl Cochain {
    pub fn zero(arity: usize, level: usize, cap: usize) -> Result<Self, PairingError> {
        let t = simplices(arity, level, false, cap)?;
        Ok(Cochain { arity, level, values: vec![0; t.len()] })
    }

    /// The indicator cochain of a single non-basepoint chain.
    pub fn indicator(chain: &PChain, cap: usize) -> Result<Self, PairingError> {
        let t = simplices(chain.ground(), chain.level(), false, cap)?;
        let mut values = vec![0; t.len()];
        let pos = t
            .position(chain)
            .ok_or_else(|| PairingError::Invalid(format!("chain {chain} not in its table")))?;
        values[pos] = 1;
        Ok(Cochain { arity: chain.ground(), level: chain.level(), values })
    }

    /// The arity-1 unit class: the indicator of the unique 0-simplex of
    /// `P(1)`.
    pub fn unit() -> Self {
        Cochain { arity: 1, level: 0, values: vec![1] }
    }

    pub fn table(&self, cap: usize) -> Result<SimplexTable, PairingError> {
        Ok(simplices(self.arity, self.level, false, cap)?)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    pub fn add(&self, other: &Cochain) -> Cochain {
        debug_assert_eq!((self.arity, self.level), (other.arity, other.level));
        Cochain {
            arity: self.arity,
            level: self.level,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, by: i64) -> Cochain {
        Cochain {
            arity: self.arity,
            level: self.level,
            values: self.values.iter().map(|v| v * by).collect(),
        }
    }

    /// Vanishes on degenerate simplices?
    pub fn is_conormalized(&self, cap: usize) -> Result<bool, PairingError> {
        let t = self.table(cap)?;
        Ok(t.chains
            .iter()
            .zip(&self.values)
            .all(|(c, &v)| v == 0 || !c.is_degenerate()))
    }
}

/// The contiguous slice of entries `from..=to`, canonicalized (basepoint
/// when the endpoint conditions fail).
pub fn slice_chain(c: &PChain, from: usize, to: usize) -> PChain {
    match c.entries() {
        None => PChain::basepoint(c.ground(), to - from),
        Some(entries) => PChain::new(c.ground(), entries[from..=to].to_vec())
            .expect("a slice of a chain is a chain"),
    }
}

/// Alternating coface sum `δ = Σ (-1)^i d^i` (pullback of the faces).
pub fn coboundary(f: &Cochain, cap: usize) -> Result<Cochain, PairingError> {
    let src = f.table(cap)?;
    let dst = simplices(f.arity, f.level + 1, false, cap)?;
    let mut values = vec![0i64; dst.len()];
    for (row, chain) in dst.chains.iter().enumerate() {
        let mut acc = 0i64;
        for i in 0..=f.level + 1 {
            if let Some(pos) = src.position(&chain.face(i)?) {
                let sign = if i % 2 == 0 { 1 } else { -1 };
                acc += sign * f.values[pos];
            }
        }
        values[row] = acc;
    }
    Ok(Cochain { arity: f.arity, level: f.level + 1, values })
}

/// The relabeling action on cochains: `(σ·f)(c) = f(σ^{-1}·c)`.
pub fn act_on_cochain(sigma: &Perm, f: &Cochain, cap: usize) -> Result<Cochain, PairingError> {
    let t = f.table(cap)?;
    let inv = sigma.inverse();
    let mut values = vec![0i64; t.len()];
    for (i, chain) in t.chains.iter().enumerate() {
        let moved = chain.act(&inv)?;
        values[i] = f.values[t.position(&moved).expect("action permutes the table")];
    }
    Ok(Cochain { arity: f.arity, level: f.level, values })
}

/// Operadic composition of cochains along `alpha`: the outer cochain `f`
/// lives on `P(n)_p` for `n` the number of blocks of the middle partition,
/// and `g_i` lives on `P(|T_i|)_{q_i}`. The value on `γ'` is
/// `f(γ) · Π_i g_i(slice_i(β_i))` through the ungrafting decomposition,
/// with inner degrees stacked by the cup shifts.
pub fn cochain_compose(
    alpha: &PChain,
    f: &Cochain,
    gs: &[Cochain],
    cap: usize,
) -> Result<Cochain, PairingError> {
    let lambda = alpha
        .entry(1)
        .ok_or_else(|| PairingError::Invalid("alpha must be a non-basepoint 2-simplex".into()))?;
    if alpha.level() != 2 {
        return Err(PairingError::DegreeMismatch("alpha must be a 2-simplex".into()));
    }
    let k = alpha.ground();
    let n = lambda.block_count();
    if f.arity != n {
        return Err(PairingError::DegreeMismatch(format!(
            "outer cochain has arity {}, middle partition has {n} blocks",
            f.arity
        )));
    }
    if gs.len() != n {
        return Err(PairingError::DegreeMismatch(format!(
            "{} inner cochains for {n} blocks",
            gs.len()
        )));
    }
    for (g, block) in gs.iter().zip(lambda.blocks()) {
        if g.arity != block.len() {
            return Err(PairingError::DegreeMismatch(format!(
                "inner cochain of arity {} over a block of size {}",
                g.arity,
                block.len()
            )));
        }
    }
    let p = f.level;
    let degrees: Vec<usize> = gs.iter().map(|g| g.level).collect();
    let total_q: usize = degrees.iter().sum();
    // prefix sums Q_0 = 0, Q_i = q_1 + … + q_i
    let mut prefix = vec![0usize; n + 1];
    for i in 0..n {
        prefix[i + 1] = prefix[i] + degrees[i];
    }
    let f_table = f.table(cap)?;
    let g_tables: Vec<SimplexTable> =
        gs.iter().map(|g| g.table(cap)).collect::<Result<_, _>>()?;
    let target = simplices(k, p + total_q, false, cap)?;
    let mut values = vec![0i64; target.len()];
    for (row, gp) in target.chains.iter().enumerate() {
        let Some((gamma, betas)) = ungraft(gp, alpha, p, total_q)? else { continue };
        let Some(f_pos) = f_table.position(&gamma) else { continue };
        let mut acc = f.values[f_pos];
        if acc == 0 {
            continue;
        }
        for (i, beta) in betas.iter().enumerate() {
            let piece = slice_chain(beta, prefix[i], prefix[i + 1]);
            let val = match g_tables[i].position(&piece) {
                Some(pos) => gs[i].values[pos],
                None => 0,
            };
            acc *= val;
            if acc == 0 {
                break;
            }
        }
        values[row] = acc;
    }
    Ok(Cochain { arity: k, level: p + total_q, values })
}

/// The graded Leibniz defect
/// `δ(f∘g⃗) - (δf)∘g⃗ - (-1)^p Σ_i (-1)^{Q_{i-1}} f∘(…, δg_i, …)`,
/// which must vanish identically.
pub fn leibniz_residual(
    alpha: &PChain,
    f: &Cochain,
    gs: &[Cochain],
    cap: usize,
) -> Result<Cochain, PairingError> {
    let p = f.level;
    let mut residual = coboundary(&cochain_compose(alpha, f, gs, cap)?, cap)?;
    let df = coboundary(f, cap)?;
    residual = residual.add(&cochain_compose(alpha, &df, gs, cap)?.scale(-1));
    let mut prefix = 0usize;
    for i in 0..gs.len() {
        let mut shifted = gs.to_vec();
        shifted[i] = coboundary(&gs[i], cap)?;
        let sign = if (p + prefix) % 2 == 0 { 1 } else { -1 };
        residual = residual.add(&cochain_compose(alpha, f, &shifted, cap)?.scale(-sign));
        prefix += gs[i].level;
    }
    Ok(residual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{Partition, DEFAULT_SIMPLEX_CAP};
    use rand::{Rng, SeedableRng};

    const CAP: usize = DEFAULT_SIMPLEX_CAP;

    fn two_simplex(k: usize, lambda: Partition) -> PChain {
        PChain::new(k, vec![Partition::min(k), lambda, Partition::max(k)]).unwrap()
    }

    #[test]
    fn indicator_composition_is_the_grafted_indicator() {
        let lam = Partition::from_blocks(3, vec![vec![1, 2], vec![3]]).unwrap();
        let alpha = two_simplex(3, lam.clone());
        let edge2 = PChain::new(2, vec![Partition::min(2), Partition::max(2)]).unwrap();
        let f = Cochain::indicator(&edge2, CAP).unwrap();
        let g1 = f.clone();
        let g2 = Cochain::unit();
        let composed = cochain_compose(&alpha, &f, &[g1, g2], CAP).unwrap();
        let expected = Cochain::indicator(&two_simplex(3, lam), CAP).unwrap();
        assert_eq!(composed, expected);
    }

    #[test]
    fn unit_composition_at_degenerate_alpha() {
        // alpha with middle = max composes with all-arity-1 inputs as the
        // identity (up to the forced level shift; here all inner degrees 0)
        let k = 3;
        let alpha = two_simplex(k, Partition::max(k));
        let units = vec![Cochain::unit(); k];
        let t = simplices(k, 2, false, CAP).unwrap();
        for chain in &t.chains {
            let f = Cochain::indicator(chain, CAP).unwrap();
            let composed = cochain_compose(&alpha, &f, &units, CAP).unwrap();
            assert_eq!(composed, f, "chain {chain}");
        }
    }

    #[test]
    fn leibniz_on_indicators_small() {
        // exhaustive over indicator cochains at small arity/levels
        for k in 2..=3 {
            let alphas = simplices(k, 2, false, CAP).unwrap();
            for alpha in &alphas.chains {
                let lambda = alpha.entry(1).unwrap().clone();
                let n = lambda.block_count();
                for p in 0..=2usize {
                    let f_table = simplices(n, p, false, CAP).unwrap();
                    if f_table.is_empty() {
                        continue;
                    }
                    // inner degrees all 1
                    let g_tables: Vec<_> = lambda
                        .blocks()
                        .iter()
                        .map(|b| simplices(b.len(), 1, false, CAP).unwrap())
                        .collect();
                    if g_tables.iter().any(|t| t.is_empty()) {
                        continue;
                    }
                    for fc in &f_table.chains {
                        let f = Cochain::indicator(fc, CAP).unwrap();
                        let gs: Vec<Cochain> = g_tables
                            .iter()
                            .map(|t| Cochain::indicator(&t.chains[0], CAP).unwrap())
                            .collect();
                        let res = leibniz_residual(alpha, &f, &gs, CAP).unwrap();
                        assert!(res.is_zero(), "alpha={alpha} f={fc}");
                    }
                }
            }
        }
    }

    #[test]
    fn leibniz_on_random_cochains() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
        let k = 3;
        let alphas = simplices(k, 2, false, CAP).unwrap();
        for _ in 0..50 {
            let alpha = &alphas.chains[rng.gen_range(0..alphas.len())];
            let lambda = alpha.entry(1).unwrap().clone();
            let n = lambda.block_count();
            let p = rng.gen_range(1..=2usize);
            let f_table = simplices(n, p, false, CAP).unwrap();
            if f_table.is_empty() {
                continue;
            }
            let mut f = Cochain::zero(n, p, CAP).unwrap();
            for v in f.values.iter_mut() {
                *v = rng.gen_range(-4..=4);
            }
            let gs: Vec<Cochain> = lambda
                .blocks()
                .iter()
                .map(|b| {
                    let q = rng.gen_range(0..=1usize.min(b.len()));
                    let mut g = Cochain::zero(b.len(), q, CAP).unwrap();
                    for v in g.values.iter_mut() {
                        *v = rng.gen_range(-4..=4);
                    }
                    g
                })
                .collect();
            if gs.iter().any(|g| g.values.is_empty()) {
                continue;
            }
            let res = leibniz_residual(alpha, &f, &gs, CAP).unwrap();
            assert!(res.is_zero(), "alpha={alpha}");
        }
    }

    #[test]
    fn degree_mismatch_is_an_error() {
        let lam = Partition::from_blocks(3, vec![vec![1, 2], vec![3]]).unwrap();
        let alpha = two_simplex(3, lam);
        let f = Cochain::unit();
        assert!(matches!(
            cochain_compose(&alpha, &f, &[Cochain::unit(), Cochain::unit()], CAP),
            Err(PairingError::DegreeMismatch(_))
        ));
    }
}
