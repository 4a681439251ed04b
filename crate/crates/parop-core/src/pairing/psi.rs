//! The assembled decomposition map: for every chain and every 2-simplex,
//! the ungrafting split (or nothing).

use super::PairingError;
use crate::poset::{simplices, ungraft, PChain, SimplexTable};

/// The full decomposition table `Ψ_{k,(p,q)}`: entry `[γ'][α]` records the
/// ungrafting of `γ'` at `α` (`None` marks the basepoint component).
#[derive(Debug, Clone)]
pub struct PsiTable {
    pub arity: usize,
    pub p: usize,
    pub q: usize,
    pub totals: SimplexTable,
    pub alphas: SimplexTable,
    pub entries: Vec<Vec<Option<(PChain, Vec<PChain>)>>>,
}

pub fn psi_map(k: usize, p: usize, q: usize, cap: usize) -> Result<PsiTable, PairingError> {
    let totals = simplices(k, p + q, false, cap)?;
    let alphas = simplices(k, 2, false, cap)?;
    let mut entries = Vec::with_capacity(totals.len());
    for gp in &totals.chains {
        let mut row = Vec::with_capacity(alphas.len());
        for alpha in &alphas.chains {
            row.push(ungraft(gp, alpha, p, q)?);
        }
        entries.push(row);
    }
    Ok(PsiTable { arity: k, p, q, totals, alphas, entries })
}

impl PsiTable {
    /// Number of defined components.
    pub fn defined_count(&self) -> usize {
        self.entries.iter().flatten().filter(|e| e.is_some()).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{Partition, DEFAULT_SIMPLEX_CAP};

    const CAP: usize = DEFAULT_SIMPLEX_CAP;

    #[test]
    fn two_element_lattice_by_hand() {
        // P(2): one nondegenerate 2-simplex (min <= lam <= max) per lam, and
        // the unique nondegenerate (p+q=2)-simplex decomposes only at the
        // forced alphas
        let t = psi_map(2, 1, 1, CAP).unwrap();
        // totals: (min,min,max), (min,max,max); alphas the same two chains
        assert_eq!(t.totals.len(), 2);
        assert_eq!(t.alphas.len(), 2);
        let dd = |entries: &[Partition]| {
            PChain::new(2, entries.to_vec()).unwrap()
        };
        let min = Partition::min(2);
        let max = Partition::max(2);
        let mmx = dd(&[min.clone(), min.clone(), max.clone()]);
        let mxx = dd(&[min.clone(), max.clone(), max.clone()]);
        // at alpha = (min<=min<=max): gamma' decomposes iff entry 1 = min
        let a_min = t.alphas.position(&mmx).unwrap();
        let a_max = t.alphas.position(&mxx).unwrap();
        let g_mmx = t.totals.position(&mmx).unwrap();
        let g_mxx = t.totals.position(&mxx).unwrap();
        assert!(t.entries[g_mmx][a_min].is_some());
        assert!(t.entries[g_mmx][a_max].is_none());
        assert!(t.entries[g_mxx][a_min].is_none());
        assert!(t.entries[g_mxx][a_max].is_some());
        // the split at alpha_min: outer on one block, inner the whole chain
        let (gamma, betas) = t.entries[g_mmx][a_min].clone().unwrap();
        assert_eq!(gamma.ground(), 1);
        assert_eq!(betas.len(), 1);
        assert_eq!(betas[0], dd(&[min, max]));
    }

    #[test]
    fn fully_degenerate_chains_decompose_where_consistent() {
        // a fully degenerate gamma' (constant entries beyond the forced
        // endpoints) decomposes exactly at the alphas whose middle matches
        // its entry at position p
        let k = 3;
        let (p, q) = (1, 1);
        let t = psi_map(k, p, q, CAP).unwrap();
        for (g_idx, gp) in t.totals.chains.iter().enumerate() {
            for (a_idx, alpha) in t.alphas.chains.iter().enumerate() {
                let defined = t.entries[g_idx][a_idx].is_some();
                let matches = gp.entry(p) == alpha.entry(1);
                assert_eq!(defined, matches, "gp={gp} alpha={alpha}");
            }
        }
    }
}
