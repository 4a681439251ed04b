//! Sparse integer matrices and Smith normal form with unimodular
//! certificates. Elimination runs in `i64` with checked arithmetic and
//! escalates to arbitrary precision on overflow; wraparound is impossible.

use super::HomologyError;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};

/// A sparse integer matrix in compressed row storage: row `i` occupies
/// `cols[indptr[i]..indptr[i+1]]` / `vals[...]`, columns sorted, no stored
/// zeros. Equality is structural, which is canonical under this invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    nrows: usize,
    ncols: usize,
    indptr: Vec<u32>,
    cols: Vec<u32>,
    vals: Vec<i64>,
}

impl IntMatrix {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        IntMatrix { nrows, ncols, indptr: vec![0; nrows + 1], cols: Vec::new(), vals: Vec::new() }
    }

    pub fn identity(n: usize) -> Self {
        IntMatrix {
            nrows: n,
            ncols: n,
            indptr: (0..=n as u32).collect(),
            cols: (0..n as u32).collect(),
            vals: vec![1; n],
        }
    }

    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, i64)>,
    ) -> Self {
        let mut maps: Vec<BTreeMap<u32, i64>> = vec![BTreeMap::new(); nrows];
        for (r, c, v) in triplets {
            assert!(r < nrows && c < ncols, "triplet out of bounds");
            let e = maps[r].entry(c as u32).or_insert(0);
            *e = e.checked_add(v).expect("triplet accumulation overflow");
        }
        let mut indptr = Vec::with_capacity(nrows + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        indptr.push(0);
        for m in maps {
            for (c, v) in m {
                if v != 0 {
                    cols.push(c);
                    vals.push(v);
                }
            }
            indptr.push(cols.len() as u32);
        }
        IntMatrix { nrows, ncols, indptr, cols, vals }
    }

    pub fn from_dense(data: &[Vec<i64>]) -> Self {
        let nrows = data.len();
        let ncols = data.first().map_or(0, |r| r.len());
        IntMatrix::from_triplets(
            nrows,
            ncols,
            data.iter()
                .enumerate()
                .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, &v)| (i, j, v))),
        )
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.cols.len()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.is_empty()
    }

    /// Entries of row `i` as `(column, value)` pairs.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (u32, i64)> + '_ {
        let lo = self.indptr[i] as usize;
        let hi = self.indptr[i + 1] as usize;
        self.cols[lo..hi].iter().copied().zip(self.vals[lo..hi].iter().copied())
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        let lo = self.indptr[i] as usize;
        let hi = self.indptr[i + 1] as usize;
        match self.cols[lo..hi].binary_search(&(j as u32)) {
            Ok(k) => self.vals[lo + k],
            Err(_) => 0,
        }
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut counts = vec![0u32; self.ncols + 1];
        for &c in &self.cols {
            counts[c as usize + 1] += 1;
        }
        for i in 0..self.ncols {
            counts[i + 1] += counts[i];
        }
        let indptr = counts.clone();
        let mut cols = vec![0u32; self.nnz()];
        let mut vals = vec![0i64; self.nnz()];
        let mut cursor = counts;
        for i in 0..self.nrows {
            for (c, v) in self.row(i) {
                let slot = cursor[c as usize] as usize;
                cols[slot] = i as u32;
                vals[slot] = v;
                cursor[c as usize] += 1;
            }
        }
        IntMatrix { nrows: self.ncols, ncols: self.nrows, indptr, cols, vals }
    }

    /// Matrix product with overflow checks.
    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.ncols, other.nrows, "dimension mismatch in matrix product");
        let mut indptr = Vec::with_capacity(self.nrows + 1);
        let mut out_cols = Vec::new();
        let mut out_vals = Vec::new();
        indptr.push(0u32);
        let mut acc: BTreeMap<u32, i64> = BTreeMap::new();
        for i in 0..self.nrows {
            acc.clear();
            for (k, v) in self.row(i) {
                for (c, w) in other.row(k as usize) {
                    let term = v.checked_mul(w).expect("matrix product overflow");
                    let e = acc.entry(c).or_insert(0);
                    *e = e.checked_add(term).expect("matrix product overflow");
                }
            }
            for (&c, &v) in acc.iter() {
                if v != 0 {
                    out_cols.push(c);
                    out_vals.push(v);
                }
            }
            indptr.push(out_cols.len() as u32);
        }
        IntMatrix { nrows: self.nrows, ncols: other.ncols, indptr, cols: out_cols, vals: out_vals }
    }

    /// Apply to an integer vector.
    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        assert_eq!(x.len(), self.ncols);
        (0..self.nrows)
            .map(|i| {
                self.row(i).fold(0i64, |acc, (c, v)| {
                    acc.checked_add(v.checked_mul(x[c as usize]).expect("overflow"))
                        .expect("overflow")
                })
            })
            .collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![0i64; self.ncols]; self.nrows];
        for i in 0..self.nrows {
            for (c, v) in self.row(i) {
                out[i][c as usize] = v;
            }
        }
        out
    }
}

/// Minimal exact-integer interface for the elimination: checked ring ops
/// (`None` signals overflow) plus Euclidean division.
trait ExactInt: Clone + Eq + Ord + std::fmt::Debug {
    fn ring_zero() -> Self;
    fn ring_one() -> Self;
    fn from_i64(v: i64) -> Option<Self>;
    fn ring_is_zero(&self) -> bool;
    fn ring_neg(&self) -> Self;
    fn cadd(&self, o: &Self) -> Option<Self>;
    fn cmul(&self, o: &Self) -> Option<Self>;
    /// Truncated division with remainder.
    fn ring_div_rem(&self, o: &Self) -> (Self, Self);
    fn ring_abs(&self) -> Self;
    fn to_big(&self) -> BigInt;
}

impl ExactInt for i64 {
    fn ring_zero() -> Self {
        0
    }
    fn ring_one() -> Self {
        1
    }
    fn from_i64(v: i64) -> Option<Self> {
        Some(v)
    }
    fn ring_is_zero(&self) -> bool {
        *self == 0
    }
    fn ring_neg(&self) -> Self {
        -*self
    }
    fn cadd(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn cmul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn ring_div_rem(&self, o: &Self) -> (Self, Self) {
        (self / o, self % o)
    }
    fn ring_abs(&self) -> Self {
        self.checked_abs().expect("abs overflow")
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl ExactInt for BigInt {
    fn ring_zero() -> Self {
        Zero::zero()
    }
    fn ring_one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Option<Self> {
        Some(BigInt::from(v))
    }
    fn ring_is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn ring_neg(&self) -> Self {
        -self
    }
    fn cadd(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn cmul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn ring_div_rem(&self, o: &Self) -> (Self, Self) {
        Integer::div_rem(self, o)
    }
    fn ring_abs(&self) -> Self {
        Signed::abs(self)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// Result of a Smith normal form computation: the nonzero diagonal
/// invariants `d_1 | d_2 | …` (positive), the rank, and, when requested,
/// unimodular `U`, `V` with `U · A · V = D`.
#[derive(Debug, Clone)]
pub struct Snf {
    pub invariants: Vec<BigInt>,
    pub rank: usize,
    pub row_transform: Option<Vec<Vec<BigInt>>>,
    pub col_transform: Option<Vec<Vec<BigInt>>>,
    pub escalated: bool,
}

struct Elim<I: ExactInt> {
    nrows: usize,
    ncols: usize,
    rows: Vec<BTreeMap<u32, I>>,
    cols: Vec<BTreeSet<u32>>,
    active_rows: BTreeSet<u32>,
    active_cols: BTreeSet<u32>,
    u: Option<Vec<Vec<I>>>,
    v: Option<Vec<Vec<I>>>,
}

impl<I: ExactInt> Elim<I> {
    fn new(a: &IntMatrix, certs: bool) -> Option<Self> {
        let mut rows: Vec<BTreeMap<u32, I>> = vec![BTreeMap::new(); a.nrows];
        let mut cols: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); a.ncols];
        for i in 0..a.nrows {
            for (c, v) in a.row(i) {
                rows[i].insert(c, I::from_i64(v)?);
                cols[c as usize].insert(i as u32);
            }
        }
        let ident = |n: usize| -> Vec<Vec<I>> {
            (0..n)
                .map(|i| (0..n).map(|j| if i == j { I::ring_one() } else { I::ring_zero() }).collect())
                .collect()
        };
        Some(Elim {
            nrows: a.nrows,
            ncols: a.ncols,
            rows,
            cols,
            active_rows: (0..a.nrows as u32).collect(),
            active_cols: (0..a.ncols as u32).collect(),
            u: certs.then(|| ident(a.nrows)),
            v: certs.then(|| ident(a.ncols)),
        })
    }

    fn set(&mut self, r: u32, c: u32, val: I) {
        if val.ring_is_zero() {
            self.rows[r as usize].remove(&c);
            self.cols[c as usize].remove(&r);
        } else {
            self.rows[r as usize].insert(c, val);
            self.cols[c as usize].insert(r);
        }
    }

    fn get(&self, r: u32, c: u32) -> I {
        self.rows[r as usize].get(&c).cloned().unwrap_or_else(I::ring_zero)
    }

    /// `row_i += q * row_r`, mirrored on U.
    fn row_axpy(&mut self, i: u32, q: &I, r: u32) -> Option<()> {
        let source: Vec<(u32, I)> =
            self.rows[r as usize].iter().map(|(&c, v)| (c, v.clone())).collect();
        for (c, v) in source {
            let cur = self.get(i, c);
            let next = cur.cadd(&q.cmul(&v)?)?;
            self.set(i, c, next);
        }
        if let Some(u) = self.u.as_mut() {
            for j in 0..self.nrows {
                let t = q.cmul(&u[r as usize][j])?;
                u[i as usize][j] = u[i as usize][j].cadd(&t)?;
            }
        }
        Some(())
    }

    /// `col_j += q * col_c`, mirrored on V.
    fn col_axpy(&mut self, j: u32, q: &I, c: u32) -> Option<()> {
        let source: Vec<(u32, I)> =
            self.cols[c as usize].iter().map(|&r| (r, self.get(r, c))).collect();
        for (r, v) in source {
            let cur = self.get(r, j);
            let next = cur.cadd(&q.cmul(&v)?)?;
            self.set(r, j, next);
        }
        if let Some(v) = self.v.as_mut() {
            for i in 0..self.ncols {
                let t = q.cmul(&v[i][c as usize])?;
                v[i][j as usize] = v[i][j as usize].cadd(&t)?;
            }
        }
        Some(())
    }

    fn swap_rows(&mut self, a: u32, b: u32) {
        if a == b {
            return;
        }
        for c in self.rows[a as usize].keys() {
            self.cols[*c as usize].remove(&a);
        }
        for c in self.rows[b as usize].keys() {
            self.cols[*c as usize].remove(&b);
        }
        self.rows.swap(a as usize, b as usize);
        for c in self.rows[a as usize].keys() {
            self.cols[*c as usize].insert(a);
        }
        for c in self.rows[b as usize].keys() {
            self.cols[*c as usize].insert(b);
        }
        if let Some(u) = self.u.as_mut() {
            u.swap(a as usize, b as usize);
        }
    }

    fn negate_row(&mut self, r: u32) {
        let cs: Vec<u32> = self.rows[r as usize].keys().copied().collect();
        for c in cs {
            let v = self.get(r, c);
            self.rows[r as usize].insert(c, v.ring_neg());
        }
        if let Some(u) = self.u.as_mut() {
            for x in u[r as usize].iter_mut() {
                *x = x.ring_neg();
            }
        }
    }

    /// Pivot choice: smallest nonzero magnitude, ties broken by least
    /// fill-in, then position. Deterministic.
    fn select_pivot(&self) -> Option<(u32, u32)> {
        let mut best: Option<(I, usize, u32, u32)> = None;
        for &r in &self.active_rows {
            for (&c, v) in &self.rows[r as usize] {
                if !self.active_cols.contains(&c) {
                    continue;
                }
                let mag = v.ring_abs();
                let fill =
                    (self.rows[r as usize].len() - 1) * (self.cols[c as usize].len() - 1);
                let candidate = (mag, fill, r, c);
                match &best {
                    Some(b) if *b <= candidate => {}
                    _ => best = Some(candidate),
                }
            }
        }
        best.map(|(_, _, r, c)| (r, c))
    }

    /// Clear the pivot column and row by Euclidean reduction, swapping the
    /// pivot inward whenever a nonzero remainder appears. Terminates because
    /// every swap strictly decreases the pivot magnitude.
    fn eliminate_at(&mut self, r: u32, c: u32) -> Option<()> {
        loop {
            self.clear_column(r, c)?;
            if !self.clear_row(r, c)? {
                return Some(());
            }
        }
    }

    fn clear_column(&mut self, r: u32, c: u32) -> Option<()> {
        'outer: loop {
            let others: Vec<u32> = self.cols[c as usize]
                .iter()
                .copied()
                .filter(|&i| i != r)
                .collect();
            if others.is_empty() {
                return Some(());
            }
            for i in others {
                let pivot = self.get(r, c);
                let a = self.get(i, c);
                if a.ring_is_zero() {
                    continue;
                }
                let (q, rem) = a.ring_div_rem(&pivot);
                self.row_axpy(i, &q.ring_neg(), r)?;
                if !rem.ring_is_zero() {
                    self.swap_rows(r, i);
                    continue 'outer;
                }
            }
        }
    }

    /// Returns whether any column swap occurred (requiring another column
    /// pass).
    fn clear_row(&mut self, r: u32, c: u32) -> Option<bool> {
        let mut swapped = false;
        'outer: loop {
            let others: Vec<u32> = self.rows[r as usize]
                .keys()
                .copied()
                .filter(|&j| j != c)
                .collect();
            if others.is_empty() {
                return Some(swapped);
            }
            for j in others {
                let pivot = self.get(r, c);
                let a = self.get(r, j);
                if a.ring_is_zero() {
                    continue;
                }
                let (q, rem) = a.ring_div_rem(&pivot);
                self.col_axpy(j, &q.ring_neg(), c)?;
                if !rem.ring_is_zero() {
                    self.swap_cols(c, j);
                    swapped = true;
                    continue 'outer;
                }
            }
        }
    }

    fn swap_cols(&mut self, a: u32, b: u32) {
        if a == b {
            return;
        }
        let entries_a: Vec<(u32, I)> =
            self.cols[a as usize].iter().map(|&r| (r, self.get(r, a))).collect();
        let entries_b: Vec<(u32, I)> =
            self.cols[b as usize].iter().map(|&r| (r, self.get(r, b))).collect();
        for (r, _) in &entries_a {
            self.rows[*r as usize].remove(&a);
        }
        for (r, _) in &entries_b {
            self.rows[*r as usize].remove(&b);
        }
        self.cols[a as usize].clear();
        self.cols[b as usize].clear();
        for (r, v) in entries_a {
            self.set(r, b, v);
        }
        for (r, v) in entries_b {
            self.set(r, a, v);
        }
        if let Some(v) = self.v.as_mut() {
            for row in v.iter_mut() {
                row.swap(a as usize, b as usize);
            }
        }
    }

    fn run(&mut self) -> Option<Vec<(u32, u32)>> {
        let mut pivots = Vec::new();
        while let Some((r, c)) = self.select_pivot() {
            self.eliminate_at(r, c)?;
            if self.get(r, c) < I::ring_zero() {
                self.negate_row(r);
            }
            self.active_rows.remove(&r);
            self.active_cols.remove(&c);
            pivots.push((r, c));
        }
        Some(pivots)
    }

    /// Enforce the divisibility chain on the recorded pivots with 2x2
    /// unimodular transformations.
    fn normalize_divisibility(&mut self, pivots: &mut [(u32, u32)]) -> Option<()> {
        let m = pivots.len();
        if m < 2 {
            return Some(());
        }
        loop {
            let mut clean = true;
            for i in 0..m - 1 {
                let (ri, ci) = pivots[i];
                let (rj, cj) = pivots[i + 1];
                let x = self.get(ri, ci);
                let y = self.get(rj, cj);
                let (_, rem) = y.ring_div_rem(&x);
                if rem.ring_is_zero() {
                    continue;
                }
                clean = false;
                // gcd trick: rows (ri, rj) by [1 1; -tb sa], cols (ci, cj)
                // by [s -b; t a] turns diag(x, y) into diag(d, xy/d)
                let (d, s, t) = gcdx(&x, &y)?;
                let (a, _) = x.ring_div_rem(&d);
                let (b, _) = y.ring_div_rem(&d);
                let tb = t.cmul(&b)?;
                let sa = s.cmul(&a)?;
                self.left_2x2(&[I::ring_one(), I::ring_one(), tb.ring_neg(), sa], ri, rj)?;
                self.right_2x2(&[s, b.ring_neg(), t, a], ci, cj)?;
                if self.get(ri, ci) < I::ring_zero() {
                    self.negate_row(ri);
                }
                if self.get(rj, cj) < I::ring_zero() {
                    self.negate_row(rj);
                }
            }
            if clean {
                return Some(());
            }
        }
    }

    /// Left-multiply rows (i, j) by `[[a, b], [c, d]]` (det ±1).
    fn left_2x2(&mut self, comps: &[I; 4], i: u32, j: u32) -> Option<()> {
        let [a, b, c, d] = comps;
        let cols: BTreeSet<u32> = self.rows[i as usize]
            .keys()
            .chain(self.rows[j as usize].keys())
            .copied()
            .collect();
        for col in cols {
            let x = self.get(i, col);
            let y = self.get(j, col);
            let ni = a.cmul(&x)?.cadd(&b.cmul(&y)?)?;
            let nj = c.cmul(&x)?.cadd(&d.cmul(&y)?)?;
            self.set(i, col, ni);
            self.set(j, col, nj);
        }
        if let Some(u) = self.u.as_mut() {
            for k in 0..self.nrows {
                let x = u[i as usize][k].clone();
                let y = u[j as usize][k].clone();
                u[i as usize][k] = a.cmul(&x)?.cadd(&b.cmul(&y)?)?;
                u[j as usize][k] = c.cmul(&x)?.cadd(&d.cmul(&y)?)?;
            }
        }
        Some(())
    }

    /// Right-multiply cols (i, j) by `[[a, b], [c, d]]` (det ±1).
    fn right_2x2(&mut self, comps: &[I; 4], i: u32, j: u32) -> Option<()> {
        let [a, b, c, d] = comps;
        let rows: BTreeSet<u32> = self.cols[i as usize]
            .iter()
            .chain(self.cols[j as usize].iter())
            .copied()
            .collect();
        for r in rows {
            let x = self.get(r, i);
            let y = self.get(r, j);
            let ni = x.cmul(a)?.cadd(&y.cmul(c)?)?;
            let nj = x.cmul(b)?.cadd(&y.cmul(d)?)?;
            self.set(r, i, ni);
            self.set(r, j, nj);
        }
        if let Some(v) = self.v.as_mut() {
            for k in 0..self.ncols {
                let x = v[k][i as usize].clone();
                let y = v[k][j as usize].clone();
                v[k][i as usize] = x.cmul(a)?.cadd(&y.cmul(c)?)?;
                v[k][j as usize] = x.cmul(b)?.cadd(&y.cmul(d)?)?;
            }
        }
        Some(())
    }
}

/// Extended gcd: `(d, s, t)` with `s·x + t·y = d > 0`.
fn gcdx<I: ExactInt>(x: &I, y: &I) -> Option<(I, I, I)> {
    let (mut r0, mut r1) = (x.clone(), y.clone());
    let (mut s0, mut s1) = (I::ring_one(), I::ring_zero());
    let (mut t0, mut t1) = (I::ring_zero(), I::ring_one());
    while !r1.ring_is_zero() {
        let (q, _) = r0.ring_div_rem(&r1);
        let r2 = r0.cadd(&q.cmul(&r1)?.ring_neg())?;
        let s2 = s0.cadd(&q.cmul(&s1)?.ring_neg())?;
        let t2 = t0.cadd(&q.cmul(&t1)?.ring_neg())?;
        r0 = r1;
        r1 = r2;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    if r0 < I::ring_zero() {
        Some((r0.ring_neg(), s0.ring_neg(), t0.ring_neg()))
    } else {
        Some((r0, s0, t0))
    }
}

fn run_snf<I: ExactInt>(a: &IntMatrix, certs: bool) -> Option<Snf> {
    let mut elim = Elim::<I>::new(a, certs)?;
    let mut pivots = elim.run()?;
    // sort pivots by magnitude, then physically move pivot k to (k, k) so
    // that U·A·V is an honest diagonal matrix
    let mut diag: Vec<(I, (u32, u32))> =
        pivots.iter().map(|&(r, c)| (elim.get(r, c), (r, c))).collect();
    diag.sort();
    for (k, (_, rc)) in diag.iter().enumerate() {
        pivots[k] = *rc;
    }
    for k in 0..pivots.len() {
        let (r, c) = pivots[k];
        let kk = k as u32;
        if r != kk {
            elim.swap_rows(kk, r);
            for p in pivots.iter_mut() {
                if p.0 == kk {
                    p.0 = r;
                } else if p.0 == r {
                    p.0 = kk;
                }
            }
        }
        let (_, c) = (pivots[k].0, c);
        if c != kk {
            elim.swap_cols(kk, c);
            for p in pivots.iter_mut() {
                if p.1 == kk {
                    p.1 = c;
                } else if p.1 == c {
                    p.1 = kk;
                }
            }
        }
        debug_assert_eq!(pivots[k], (kk, kk));
    }
    elim.normalize_divisibility(&mut pivots)?;
    let invariants: Vec<BigInt> = pivots.iter().map(|&(r, c)| elim.get(r, c).to_big()).collect();
    let rank = invariants.len();
    let to_big_mat =
        |m: Vec<Vec<I>>| m.into_iter().map(|r| r.into_iter().map(|x| x.to_big()).collect()).collect();
    Some(Snf {
        invariants,
        rank,
        row_transform: elim.u.take().map(to_big_mat),
        col_transform: elim.v.take().map(to_big_mat),
        escalated: false,
    })
}

/// Smith normal form of `a`. Invariant factors are positive and form a
/// divisibility chain; with `with_certificates`, unimodular `U`, `V` with
/// `U · a · V = diag(invariants)` are returned and the product identity is
/// re-verified in arbitrary precision.
pub fn smith_normal_form(a: &IntMatrix, with_certificates: bool) -> Result<Snf, HomologyError> {
    let snf = match run_snf::<i64>(a, with_certificates) {
        Some(s) => s,
        None => {
            let mut s = run_snf::<BigInt>(a, with_certificates)
                .expect("BigInt elimination cannot overflow");
            s.escalated = true;
            s
        }
    };
    for w in snf.invariants.windows(2) {
        debug_assert!((&w[1] % &w[0]).is_zero(), "divisibility chain violated");
    }
    if with_certificates {
        let u = snf.row_transform.as_ref().unwrap();
        let v = snf.col_transform.as_ref().unwrap();
        if !certificate_checks(a, u, v, &snf.invariants) {
            return Err(HomologyError::CertificateCheck);
        }
    }
    Ok(snf)
}

/// Rank over the integers (equivalently over the rationals).
pub fn rank(a: &IntMatrix) -> usize {
    smith_normal_form(a, false).expect("rank computation").rank
}

/// Integer kernel basis of `a`, as the trailing columns of the SNF column
/// transform.
pub fn kernel_basis(a: &IntMatrix) -> Result<Vec<Vec<BigInt>>, HomologyError> {
    let snf = smith_normal_form(a, true)?;
    let v = snf.col_transform.as_ref().unwrap();
    let mut basis = Vec::new();
    for j in snf.rank..a.ncols() {
        basis.push((0..a.ncols()).map(|i| v[i][j].clone()).collect());
    }
    Ok(basis)
}

/// A right inverse `X` with `a · X = I`, which exists iff `a` is onto
/// (full row rank with all invariant factors `±1`).
pub fn right_inverse(a: &IntMatrix) -> Result<Option<Vec<Vec<BigInt>>>, HomologyError> {
    let snf = smith_normal_form(a, true)?;
    if snf.rank != a.nrows() || snf.invariants.iter().any(|d| !d.is_one()) {
        return Ok(None);
    }
    let u = snf.row_transform.as_ref().unwrap();
    let v = snf.col_transform.as_ref().unwrap();
    // X = V[:, 0..r] · U
    let r = snf.rank;
    let mut x = vec![vec![BigInt::zero(); a.nrows()]; a.ncols()];
    for i in 0..a.ncols() {
        for j in 0..a.nrows() {
            let mut acc = BigInt::zero();
            for k in 0..r {
                acc += &v[i][k] * &u[k][j];
            }
            x[i][j] = acc;
        }
    }
    Ok(Some(x))
}

fn certificate_checks(
    a: &IntMatrix,
    u: &[Vec<BigInt>],
    v: &[Vec<BigInt>],
    invariants: &[BigInt],
) -> bool {
    // U · a in big arithmetic, then (U·a) · V == diag
    let nrows = a.nrows();
    let ncols = a.ncols();
    let mut ua = vec![vec![BigInt::zero(); ncols]; nrows];
    for (i, urow) in u.iter().enumerate() {
        for (k, coeff) in urow.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            for (c, val) in a.row(k) {
                ua[i][c as usize] += coeff * BigInt::from(val);
            }
        }
    }
    for i in 0..nrows {
        for j in 0..ncols {
            let mut acc = BigInt::zero();
            for k in 0..ncols {
                if !ua[i][k].is_zero() && !v[k][j].is_zero() {
                    acc += &ua[i][k] * &v[k][j];
                }
            }
            let expect = if i == j && i < invariants.len() {
                invariants[i].clone()
            } else {
                BigInt::zero()
            };
            if acc != expect {
                return false;
            }
        }
    }
    unimodular(u) && unimodular(v)
}

fn unimodular(m: &[Vec<BigInt>]) -> bool {
    // Bareiss fraction-free elimination leaves det (up to swap sign) in the
    // bottom-right pivot of a square full-rank matrix
    let n = m.len();
    if n == 0 {
        return true;
    }
    let mut work: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for col in 0..n {
        let Some(pr) = (col..n).find(|&r| !work[r][col].is_zero()) else {
            return false;
        };
        if pr != col {
            work.swap(pr, col);
            sign = -sign;
        }
        for r in col + 1..n {
            for c in col + 1..n {
                let num = &work[col][col] * &work[r][c] - &work[r][col] * &work[col][c];
                work[r][c] = num / &prev;
            }
            work[r][col] = BigInt::zero();
        }
        prev = work[col][col].clone();
    }
    Signed::abs(&(sign * &work[n - 1][n - 1])).is_one()
}

/// Rank of `a` over the prime field `F_p`.
pub fn rank_mod_p(a: &IntMatrix, p: u64) -> usize {
    assert!(p >= 2);
    let mut rows: Vec<Vec<u64>> = (0..a.nrows)
        .map(|i| {
            let mut dense = vec![0u64; a.ncols];
            for (c, v) in a.row(i) {
                dense[c as usize] = v.rem_euclid(p as i64) as u64;
            }
            dense
        })
        .collect();
    let mut rank = 0usize;
    for col in 0..a.ncols {
        let Some(pr) = (rank..rows.len()).find(|&r| rows[r][col] % p != 0) else {
            continue;
        };
        rows.swap(rank, pr);
        let inv = mod_inverse(rows[rank][col] % p, p);
        for c in col..a.ncols {
            rows[rank][c] = rows[rank][c] % p * inv % p;
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][col] % p != 0 {
                let factor = rows[r][col] % p;
                for c in col..a.ncols {
                    let sub = factor * rows[rank][c] % p;
                    rows[r][c] = (rows[r][c] + p - sub) % p;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // Fermat
    let mut base = a % p;
    let mut exp = p - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}
