//! Exact subset-sum counting modulo a prime.
//!
//! Tables count subsets of *positions*, so repeated residues (and the zero
//! weight contributed by coordinate `n` when `p = n`) are handled without
//! special cases.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::modmath::{is_prime, LacedParams};

/// A list of residues in `[0, p)`; duplicates allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResidueMultiset {
    p: usize,
    elements: Vec<usize>,
}

impl ResidueMultiset {
    pub fn new(p: usize, elements: Vec<usize>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if let Some(&value) = elements.iter().find(|&&e| e >= p) {
            return Err(Error::ResidueOutOfRange { value, p });
        }
        Ok(Self { p, elements })
    }

    /// Reduces arbitrary integers into `[0, p)`.
    pub fn reduced(p: usize, values: impl IntoIterator<Item = i64>) -> Result<Self> {
        let elements = values.into_iter().map(|v| v.rem_euclid(p as i64) as usize).collect();
        Self::new(p, elements)
    }

    /// All of `Z_p`.
    pub fn full(p: usize) -> Result<Self> {
        Self::new(p, (0..p).collect())
    }

    /// `Z_p` with the given residues removed.
    pub fn complement(p: usize, removed: &BTreeSet<usize>) -> Result<Self> {
        if let Some(&value) = removed.iter().find(|&&e| e >= p) {
            return Err(Error::ResidueOutOfRange { value, p });
        }
        Self::new(p, (0..p).filter(|r| !removed.contains(r)).collect())
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, r: usize) -> bool {
        self.elements.contains(&r)
    }

    /// Fails with the first repeated value, if any.
    pub fn ensure_distinct(&self) -> Result<()> {
        let mut seen = vec![false; self.p];
        for &e in &self.elements {
            if std::mem::replace(&mut seen[e], true) {
                return Err(Error::DuplicateResidue(e));
            }
        }
        Ok(())
    }

    pub(crate) fn check_residue(&self, b: usize) -> Result<()> {
        if b >= self.p {
            return Err(Error::ResidueOutOfRange { value: b, p: self.p });
        }
        Ok(())
    }
}

/// `counts[r]` = number of counted subsets whose sum is `≡ r (mod p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumCountTable {
    p: usize,
    counts: Vec<BigUint>,
}

impl SumCountTable {
    /// The table of the empty set: one subset, sum 0.
    pub fn empty_set(p: usize) -> Self {
        Self::delta(p, 0)
    }

    fn delta(p: usize, r: usize) -> Self {
        let mut counts = vec![BigUint::zero(); p];
        counts[r] = BigUint::one();
        Self { p, counts }
    }

    fn zeros(p: usize) -> Self {
        Self { p, counts: vec![BigUint::zero(); p] }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    pub fn get(&self, r: usize) -> &BigUint {
        &self.counts[r % self.p]
    }

    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    /// Adjoins one element of residue `d`: `new[r] = old[r] + old[r - d]`.
    pub fn with_element(&self, d: usize) -> Self {
        let p = self.p;
        let d = d % p;
        let counts = (0..p)
            .map(|r| &self.counts[r] + &self.counts[(r + p - d) % p])
            .collect();
        Self { p, counts }
    }

    /// Inverse of [`with_element`](Self::with_element): the table of the
    /// position set with one element of residue `d` taken out.
    ///
    /// Solves `g[r] + g[r - d] = h[r]` around the cycle generated by `d`.
    /// Returns `None` when the system is singular (`p = 2`, `d = 1`), or when
    /// `self` does not actually contain such an element.
    pub fn without_element(&self, d: usize) -> Option<Self> {
        let p = self.p;
        let d = d % p;
        if d == 0 {
            // h = 2g
            let two = BigUint::from(2u32);
            let counts = self.counts.iter().map(|c| c / &two).collect::<Vec<_>>();
            return counts
                .iter()
                .zip(&self.counts)
                .all(|(g, h)| g * &two == *h)
                .then_some(Self { p, counts });
        }
        if p == 2 {
            return None;
        }
        // 2 g[0] = Σ_j (-1)^j h[-j d], valid because p is odd.
        let mut alternating = BigInt::zero();
        for j in 0..p {
            let h = BigInt::from(self.counts[(p - (j * d) % p) % p].clone());
            if j % 2 == 0 {
                alternating += h;
            } else {
                alternating -= h;
            }
        }
        let two = BigInt::from(2);
        if &alternating % &two != BigInt::zero() {
            return None;
        }
        let mut g = alternating / two;
        let mut counts = vec![BigUint::zero(); p];
        let mut r = 0;
        for _ in 0..p {
            counts[r] = g.to_biguint()?;
            let next = (r + d) % p;
            g = BigInt::from(self.counts[next].clone()) - &g;
            r = next;
        }
        Some(Self { p, counts })
    }
}

/// `counts[b]` = number of subsets of `d`'s positions summing to `b`.
pub fn count_subsets_mod_p(d: &ResidueMultiset) -> SumCountTable {
    d.elements
        .iter()
        .fold(SumCountTable::empty_set(d.p), |table, &e| table.with_element(e))
}

/// `counts[b]` = number of size-`k` subsets of `d`'s positions summing to `b`.
/// All zeros when `k > |D|`.
pub fn count_k_subsets_mod_p(d: &ResidueMultiset, k: usize) -> SumCountTable {
    let p = d.p;
    if k > d.len() {
        return SumCountTable::zeros(p);
    }
    // by_size[j][r]: j-subsets with sum r among the elements seen so far.
    let mut by_size = vec![vec![BigUint::zero(); p]; k + 1];
    by_size[0][0] = BigUint::one();
    for (seen, &e) in d.elements.iter().enumerate() {
        for j in (1..=k.min(seen + 1)).rev() {
            let (lower, upper) = by_size.split_at_mut(j);
            let prev = &lower[j - 1];
            for (r, slot) in upper[0].iter_mut().enumerate() {
                *slot += &prev[(r + p - e) % p];
            }
        }
    }
    SumCountTable { p, counts: by_size.swap_remove(k) }
}

/// Coordinate weights `{k mod p : k ∈ 1..=n, k ∉ excluded}`, in coordinate order.
pub fn laced_weight_multiset(params: &LacedParams, excluded: &BTreeSet<usize>) -> Result<ResidueMultiset> {
    if let Some(&index) = excluded.iter().find(|&&i| i == 0 || i > params.n()) {
        return Err(Error::IndexOutOfRange { index, n: params.n() });
    }
    let p = params.p();
    let elements = (1..=params.n()).filter(|k| !excluded.contains(k)).map(|k| k % p).collect();
    ResidueMultiset::new(p, elements)
}

/// Subset-sum tables for the laced coordinates with a few coordinates held out.
///
/// The table for `{1..n}` and the `n` single-exclusion tables are built once;
/// further exclusions are peeled off with [`SumCountTable::without_element`],
/// falling back to a fresh DP when that is singular.
#[derive(Debug, Clone)]
pub struct ExclusionCounter {
    params: LacedParams,
    full: SumCountTable,
    singles: Vec<SumCountTable>,
}

impl ExclusionCounter {
    pub fn new(params: LacedParams) -> Self {
        let full = count_subsets_mod_p(
            &laced_weight_multiset(&params, &BTreeSet::new()).expect("empty exclusion is valid"),
        );
        let singles = (1..=params.n())
            .map(|i| {
                full.without_element(i % params.p())
                    .unwrap_or_else(|| Self::fresh(&params, &BTreeSet::from([i])))
            })
            .collect();
        Self { params, full, singles }
    }

    fn fresh(params: &LacedParams, excluded: &BTreeSet<usize>) -> SumCountTable {
        count_subsets_mod_p(&laced_weight_multiset(params, excluded).expect("indices validated by caller"))
    }

    pub fn params(&self) -> &LacedParams {
        &self.params
    }

    pub fn full(&self) -> &SumCountTable {
        &self.full
    }

    /// Table of subsets of `{1..n} ∖ excluded`. Indices must lie in `1..=n`.
    pub fn table_without(&self, excluded: &BTreeSet<usize>) -> SumCountTable {
        let mut iter = excluded.iter();
        let Some(&first) = iter.next() else {
            return self.full.clone();
        };
        assert!((1..=self.params.n()).contains(&first));
        let mut table = self.singles[first - 1].clone();
        for &i in iter {
            assert!(i <= self.params.n());
            match table.without_element(i % self.params.p()) {
                Some(t) => table = t,
                None => return Self::fresh(&self.params, excluded),
            }
        }
        table
    }
}
