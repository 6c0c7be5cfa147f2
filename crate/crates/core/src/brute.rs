//! Exhaustive-enumeration ground truth.
//!
//! Every quantity here is computed by walking all inputs (or all subsets /
//! tuples) directly. Sums run in parallel over fixed chunks of the mask range
//! and reduce with exact integer addition, so results do not depend on the
//! schedule.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rayon::prelude::*;

use crate::counting::ResidueMultiset;
use crate::error::{Error, Result};
use crate::laced::{eval_f, flip, InputVector, MaskEvaluator};
use crate::modmath::LacedParams;

pub const DEFAULT_ENUMERATION_LIMIT: usize = 24;
/// Hard ceiling: the truth table for `n` variables occupies `2^n` bits.
pub const MAX_ENUMERATION_LIMIT: usize = 34;

/// Total, average and (when known) maximum sensitivity of `f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SensitivityReport {
    pub n: usize,
    /// `Σ_X Σ_i |f(X) - f(X^{(i)})|`.
    pub total_flips: BigUint,
    /// `total_flips / 2^n`, exact.
    pub average: BigRational,
    /// `max_X σ_{s,X}(f)`; only the enumeration path produces it.
    pub maximum: Option<usize>,
}

impl SensitivityReport {
    pub fn new(n: usize, total_flips: BigUint, maximum: Option<usize>) -> Self {
        let average = BigRational::new(BigInt::from(total_flips.clone()), BigInt::from(1) << n);
        Self { n, total_flips, average, maximum }
    }
}

/// Enumeration oracle with a configurable size limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Brute {
    limit: usize,
}

impl Default for Brute {
    fn default() -> Self {
        Self { limit: DEFAULT_ENUMERATION_LIMIT }
    }
}

impl Brute {
    pub fn with_limit(limit: usize) -> Result<Self> {
        if limit > MAX_ENUMERATION_LIMIT {
            return Err(Error::Invalid(format!(
                "enumeration limit {limit} exceeds the hard ceiling {MAX_ENUMERATION_LIMIT}"
            )));
        }
        Ok(Self { limit })
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    fn check(&self, size: usize) -> Result<()> {
        if size > self.limit {
            return Err(Error::EnumerationLimit { size, limit: self.limit });
        }
        Ok(())
    }

    /// Truth table of `f` as a bitset, bit `mask` = `f(mask)`.
    fn truth_table(&self, params: &LacedParams) -> Result<Vec<u64>> {
        if params.n() == 0 {
            return Err(Error::EmptyInput);
        }
        self.check(params.n())?;
        let ev = MaskEvaluator::new(params);
        let size = 1u64 << params.n();
        let words = size.div_ceil(64) as usize;
        Ok((0..words)
            .into_par_iter()
            .map(|w| {
                let base = w as u64 * 64;
                (0..64u64.min(size - base)).fold(0u64, |acc, b| acc | (ev.f(base + b) as u64) << b)
            })
            .collect())
    }

    /// `wt(f) = #{X : f(X) = 1}`.
    pub fn weight(&self, params: &LacedParams) -> Result<BigUint> {
        let table = self.truth_table(params)?;
        Ok(BigUint::from(table.iter().map(|w| w.count_ones() as u64).sum::<u64>()))
    }

    /// `σ_{s,X}(f)`; not subject to the enumeration limit.
    pub fn sensitivity_at(&self, params: &LacedParams, x: &InputVector) -> Result<usize> {
        let fx = eval_f(params, x)?;
        let mut count = 0;
        for i in 1..=params.n() {
            if eval_f(params, &flip(x, i)?)? != fx {
                count += 1;
            }
        }
        Ok(count)
    }

    /// Per-input sensitivities reduced to `(total, max)`.
    fn sensitivity_totals(&self, params: &LacedParams) -> Result<(u64, usize)> {
        let table = self.truth_table(params)?;
        let n = params.n();
        let bit = |m: u64| table[(m >> 6) as usize] >> (m & 63) & 1;
        let size = 1u64 << n;
        let chunk = 1u64 << 12;
        Ok((0..size.div_ceil(chunk) as usize)
            .into_par_iter()
            .map(|c| {
                let start = c as u64 * chunk;
                (start..size.min(start + chunk)).fold((0u64, 0usize), |(t, mx), m| {
                    let fx = bit(m);
                    let s = (0..n).filter(|&i| bit(m ^ 1 << i) != fx).count();
                    (t + s as u64, mx.max(s))
                })
            })
            .reduce(|| (0, 0), |(t1, m1), (t2, m2)| (t1 + t2, m1.max(m2))))
    }

    /// `σ_s(f) = max_X σ_{s,X}(f)`.
    pub fn max_sensitivity(&self, params: &LacedParams) -> Result<usize> {
        Ok(self.sensitivity_totals(params)?.1)
    }

    /// Exact average sensitivity together with the maximum.
    pub fn avg_sensitivity(&self, params: &LacedParams) -> Result<SensitivityReport> {
        let (total, max) = self.sensitivity_totals(params)?;
        Ok(SensitivityReport::new(params.n(), BigUint::from(total), Some(max)))
    }

    /// Subsets of `d`'s positions with sum `≡ b`, optionally of size exactly `k`.
    pub fn count_subsets(&self, d: &ResidueMultiset, b: usize, k: Option<usize>) -> Result<BigUint> {
        d.check_residue(b)?;
        self.check(d.len())?;
        let p = d.p();
        let elems = d.elements();
        let count = (0..1u64 << elems.len())
            .into_par_iter()
            .filter(|&m| k.is_none_or(|k| m.count_ones() as usize == k))
            .filter(|&m| {
                let sum: usize = (0..elems.len()).filter(|&j| m >> j & 1 == 1).map(|j| elems[j]).sum();
                sum % p == b
            })
            .count();
        Ok(BigUint::from(count))
    }

    /// Ordered `k`-tuples of pairwise-distinct elements of `d` with sum `≡ b`.
    pub fn count_distinct_tuples(&self, d: &ResidueMultiset, b: usize, k: usize) -> Result<BigUint> {
        d.check_residue(b)?;
        d.ensure_distinct()?;
        self.check(d.len())?;
        fn walk(elems: &[usize], used: &mut [bool], left: usize, sum: usize, p: usize, b: usize) -> u64 {
            if left == 0 {
                return (sum % p == b) as u64;
            }
            let mut total = 0;
            for j in 0..elems.len() {
                if !used[j] {
                    used[j] = true;
                    total += walk(elems, used, left - 1, sum + elems[j], p, b);
                    used[j] = false;
                }
            }
            total
        }
        let elems = d.elements();
        let mut used = vec![false; elems.len()];
        Ok(BigUint::from(walk(elems, &mut used, k, 0, d.p(), b)))
    }
}

pub fn brute_weight(params: &LacedParams) -> Result<BigUint> {
    Brute::default().weight(params)
}

pub fn brute_sensitivity_at(params: &LacedParams, x: &InputVector) -> Result<usize> {
    Brute::default().sensitivity_at(params, x)
}

pub fn brute_max_sensitivity(params: &LacedParams) -> Result<usize> {
    Brute::default().max_sensitivity(params)
}

pub fn brute_avg_sensitivity(params: &LacedParams) -> Result<SensitivityReport> {
    Brute::default().avg_sensitivity(params)
}

pub fn brute_count_subsets(d: &ResidueMultiset, b: usize, k: Option<usize>) -> Result<BigUint> {
    Brute::default().count_subsets(d, b, k)
}

pub fn brute_count_distinct_tuples(d: &ResidueMultiset, b: usize, k: usize) -> Result<BigUint> {
    Brute::default().count_distinct_tuples(d, b, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};

    fn params(n: usize) -> LacedParams {
        LacedParams::new(n).unwrap()
    }

    fn set(p: usize, v: &[usize]) -> ResidueMultiset {
        ResidueMultiset::new(p, v.to_vec()).unwrap()
    }

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn weight_small_cases() {
        assert_eq!(brute_weight(&params(1)).unwrap(), big(1));
        assert_eq!(brute_weight(&params(2)).unwrap(), big(3));
    }

    #[test]
    fn weight_n4_by_hand_listing() {
        // n = 4, p = 5: list f over all 16 inputs using the vector path.
        let pr = params(4);
        let ones = (0..16u64)
            .filter(|&m| eval_f(&pr, &InputVector::from_mask(m, 4)).unwrap())
            .count() as u64;
        assert_eq!(brute_weight(&pr).unwrap(), big(ones));
    }

    #[test]
    fn sensitivity_at_examples() {
        let pr = params(2);
        let at = |s: &str| brute_sensitivity_at(&pr, &s.parse().unwrap()).unwrap();
        assert_eq!(at("00"), 2);
        assert_eq!(at("11"), 0);
        assert_eq!(at("10"), 1);
    }

    #[test]
    fn max_and_average_small_cases() {
        assert_eq!(brute_max_sensitivity(&params(2)).unwrap(), 2);
        assert_eq!(brute_max_sensitivity(&params(1)).unwrap(), 1);
        let r2 = brute_avg_sensitivity(&params(2)).unwrap();
        assert_eq!(r2.total_flips, big(4));
        assert_eq!(r2.average, BigRational::one());
        let r1 = brute_avg_sensitivity(&params(1)).unwrap();
        assert_eq!(r1.total_flips, big(2));
        assert_eq!(r1.average, BigRational::one());
    }

    #[test]
    fn fast_totals_match_pointwise_definition() {
        for n in 1..=10 {
            let pr = params(n);
            let brute = Brute::default();
            let mut total = 0usize;
            let mut max = 0usize;
            for m in 0..1u64 << n {
                let s = brute.sensitivity_at(&pr, &InputVector::from_mask(m, n)).unwrap();
                total += s;
                max = max.max(s);
            }
            let report = brute.avg_sensitivity(&pr).unwrap();
            assert_eq!(report.total_flips, big(total as u64), "n = {n}");
            assert_eq!(report.maximum, Some(max), "n = {n}");
        }
    }

    #[test]
    fn limit_is_enforced() {
        let brute = Brute::with_limit(6).unwrap();
        assert_eq!(brute.weight(&params(7)), Err(Error::EnumerationLimit { size: 7, limit: 6 }));
        assert!(brute.weight(&params(6)).is_ok());
        assert!(Brute::with_limit(MAX_ENUMERATION_LIMIT + 1).is_err());
    }

    #[test]
    fn subset_examples() {
        assert_eq!(brute_count_subsets(&set(3, &[1, 2]), 0, None).unwrap(), big(2));
        assert_eq!(brute_count_subsets(&set(5, &[1, 2, 3, 4]), 0, Some(2)).unwrap(), big(2));
        assert_eq!(brute_count_subsets(&set(7, &[3, 5, 6]), 0, Some(0)).unwrap(), big(1));
        assert_eq!(brute_count_subsets(&set(7, &[3, 5, 6]), 2, Some(0)).unwrap(), big(0));
    }

    #[test]
    fn tuple_examples() {
        let d = set(5, &[1, 2, 3, 4]);
        assert_eq!(brute_count_distinct_tuples(&d, 0, 2).unwrap(), big(4));
        assert_eq!(brute_count_distinct_tuples(&d, 3, 1).unwrap(), big(1));
        assert_eq!(brute_count_distinct_tuples(&d, 0, 1).unwrap(), big(0));
        assert_eq!(
            brute_count_distinct_tuples(&set(5, &[1, 1]), 2, 2),
            Err(Error::DuplicateResidue(1))
        );
    }

    #[test]
    fn subset_counts_sum_to_power_of_two() {
        let d = set(7, &[0, 1, 1, 3, 6, 6, 2]);
        let total: BigUint = (0..7).map(|b| brute_count_subsets(&d, b, None).unwrap()).sum();
        assert_eq!(total, big(1 << 7));
    }

    #[test]
    fn tuple_counts_sum_to_falling_factorial() {
        let d = set(11, &[0, 2, 3, 5, 7, 10]);
        for k in 0..=4 {
            let total: BigUint = (0..11).map(|b| brute_count_distinct_tuples(&d, b, k).unwrap()).sum();
            let ff = crate::modmath::falling_factorial(6, k).to_biguint().unwrap();
            assert_eq!(total, ff);
        }
    }

    #[test]
    fn weight_and_zero_count_partition_the_cube() {
        for n in 1..=12 {
            let pr = params(n);
            let ev = MaskEvaluator::new(&pr);
            let zeros = (0..1u64 << n).filter(|&m| !ev.f(m)).count() as u64;
            assert_eq!(brute_weight(&pr).unwrap() + big(zeros), big(1 << n));
        }
    }

    #[test]
    fn total_flips_is_twice_the_zero_to_one_edges() {
        for n in 1..=12 {
            let pr = params(n);
            let ev = MaskEvaluator::new(&pr);
            let up = (0..1u64 << n)
                .filter(|&m| !ev.f(m))
                .map(|m| (0..n).filter(|&i| ev.f(m ^ 1 << i)).count() as u64)
                .sum::<u64>();
            let report = brute_avg_sensitivity(&pr).unwrap();
            assert_eq!(report.total_flips, big(2 * up));
            assert!((&report.total_flips % 2u32).is_zero());
            assert!(report.average <= BigRational::from_integer(n.into()));
        }
    }
}
