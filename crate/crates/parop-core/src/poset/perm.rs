//! Permutations of `{1..n}`.

use super::PosetError;
use std::fmt;

/// A permutation of `{1..n}`, stored as the image sequence
/// `images[i] = σ(i+1)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm { images: (1..=n as u32).collect() }
    }

    /// Validating constructor from the image sequence `σ(1), …, σ(n)`.
    pub fn from_images(images: Vec<u32>) -> Result<Self, PosetError> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &x in &images {
            if x == 0 || x as usize > n || seen[x as usize] {
                return Err(PosetError::NotAPermutation(n));
            }
            seen[x as usize] = true;
        }
        Ok(Perm { images })
    }

    /// The transposition `(a b)` in `Σ_n`.
    pub fn transposition(n: usize, a: u32, b: u32) -> Self {
        let mut images: Vec<u32> = (1..=n as u32).collect();
        images.swap(a as usize - 1, b as usize - 1);
        Perm { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, x: u32) -> u32 {
        self.images[x as usize - 1]
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    /// Composite `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm { images: other.images.iter().map(|&x| self.apply(x)).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0u32; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize - 1] = i as u32 + 1;
        }
        Perm { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| x as usize == i + 1)
    }

    /// All of `Σ_n` in lexicographic order of image sequences.
    pub fn all(n: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut images: Vec<u32> = (1..=n as u32).collect();
        loop {
            out.push(Perm { images: images.clone() });
            if !next_permutation(&mut images) {
                break;
            }
        }
        out
    }

    /// Sign of the permutation.
    pub fn sign(&self) -> i64 {
        let mut seen = vec![false; self.images.len()];
        let mut sign = 1i64;
        for start in 0..self.images.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i] as usize - 1;
                len += 1;
            }
            if len % 2 == 0 {
                sign = -sign;
            }
        }
        sign
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}]",
            self.images.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
        )
    }
}

fn next_permutation(seq: &mut [u32]) -> bool {
    if seq.len() < 2 {
        return false;
    }
    let mut i = seq.len() - 1;
    while i > 0 && seq[i - 1] >= seq[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = seq.len() - 1;
    while seq[j] <= seq[i - 1] {
        j -= 1;
    }
    seq.swap(i - 1, j);
    seq[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_laws() {
        for sigma in Perm::all(4) {
            assert_eq!(sigma.compose(&sigma.inverse()), Perm::identity(4));
            assert_eq!(sigma.inverse().compose(&sigma), Perm::identity(4));
            for tau in Perm::all(4) {
                for x in 1..=4 {
                    assert_eq!(sigma.compose(&tau).apply(x), sigma.apply(tau.apply(x)));
                }
            }
        }
    }

    #[test]
    fn enumeration_size_and_determinism() {
        assert_eq!(Perm::all(4).len(), 24);
        assert_eq!(Perm::all(4), Perm::all(4));
        assert_eq!(Perm::all(0).len(), 1);
    }

    #[test]
    fn sign_multiplicative() {
        for sigma in Perm::all(4) {
            for tau in Perm::all(4) {
                assert_eq!(sigma.compose(&tau).sign(), sigma.sign() * tau.sign());
            }
        }
        assert_eq!(Perm::transposition(5, 2, 4).sign(), -1);
    }

    #[test]
    fn from_images_validates() {
        assert!(Perm::from_images(vec![1, 1, 3]).is_err());
        assert!(Perm::from_images(vec![1, 4, 3]).is_err());
        assert!(Perm::from_images(vec![2, 1, 3]).is_ok());
    }
}
