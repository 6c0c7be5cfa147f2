//! Exact weight and average sensitivity in polynomial time.
//!
//! Both quantities are split by the value `s = s(X) ∈ [1, p]`. Once `s` and a
//! handful of coordinates are pinned, the number of inputs completing them is a
//! single subset-sum count over the remaining coordinate weights.

use std::collections::{BTreeSet, HashMap};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::brute::SensitivityReport;
use crate::counting::{ExclusionCounter, SumCountTable};
use crate::error::Result;
use crate::laced::read_index;
use crate::modmath::{residue, shifted_residue, LacedParams};

/// `wt(f)`.
///
/// For `s <= n` the inputs with `f(X) = 1` and `s(X) = s` are those with
/// `x_s = 1` whose other coordinates sum to `0`; for `s > n` they have
/// `x_1 = 1` and the rest sums to `s - 1`.
pub fn weight_exact(params: &LacedParams) -> BigUint {
    weight_with(&ExclusionCounter::new(*params))
}

fn weight_with(counter: &ExclusionCounter) -> BigUint {
    let params = counter.params();
    let (n, p) = (params.n(), params.p());
    let read_s: BigUint = (1..=n)
        .map(|s| counter.table_without(&BTreeSet::from([s])).get(0).clone())
        .sum();
    let without_first = counter.table_without(&BTreeSet::from([1]));
    let read_first: BigUint = (n + 1..=p).map(|s| without_first.get(s - 1).clone()).sum();
    read_s + read_first
}

/// Exact `σ_av(f)` without enumerating `Z_2^n`.
///
/// For every flip index `i`, value of `x_i` and value `s = s(X)`, the flipped
/// sum `s'` is determined, hence so are the coordinates `a` and `a'` that `f`
/// reads before and after the flip. Each consistent assignment of the bits at
/// `{i, a, a'}` that changes `f` contributes the number of ways to complete the
/// remaining coordinates to the total `s`.
pub fn avg_sensitivity_exact(params: &LacedParams) -> SensitivityReport {
    let counter = ExclusionCounter::new(*params);
    let total = sensitivity_total_with(&counter);
    SensitivityReport::new(params.n(), total, None)
}

fn sensitivity_total_with(counter: &ExclusionCounter) -> BigUint {
    let n = counter.params().n();
    (1..=n)
        .into_par_iter()
        .map(|i| flips_at_index(counter, i))
        .collect::<Vec<_>>()
        .into_iter()
        .sum()
}

/// `#{X : f(X) ≠ f(X^{(i)})}`.
fn flips_at_index(counter: &ExclusionCounter, i: usize) -> BigUint {
    let (n, p) = (counter.params().n(), counter.params().p());
    let mut tables: HashMap<Vec<usize>, SumCountTable> = HashMap::new();
    let mut total = BigUint::zero();
    for x_i in [false, true] {
        for s in 1..=p {
            let delta = if x_i { -(i as i64) } else { i as i64 };
            let s_flipped = shifted_residue(s as i64 + delta, p).value();
            let a = read_index(n, s);
            let a_flipped = read_index(n, s_flipped);

            let fixed: BTreeSet<usize> = [i, a, a_flipped].into_iter().collect();
            let fixed: Vec<usize> = fixed.into_iter().collect();
            let free: Vec<usize> = fixed.iter().copied().filter(|&j| j != i).collect();
            let table = tables
                .entry(fixed.clone())
                .or_insert_with(|| counter.table_without(&fixed.iter().copied().collect()));

            for pattern in 0..1u32 << free.len() {
                let value = |j: usize| -> bool {
                    if j == i {
                        x_i
                    } else {
                        let pos = free.iter().position(|&f| f == j).expect("j is fixed");
                        pattern >> pos & 1 == 1
                    }
                };
                let before = value(a);
                let after = if a_flipped == i { !x_i } else { value(a_flipped) };
                if before == after {
                    continue;
                }
                let pinned: usize = fixed.iter().filter(|&&j| value(j)).sum();
                total += table.get(residue(s as i64 - pinned as i64, p));
            }
        }
    }
    total
}

/// One row of the asymptotic sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticRow {
    pub n: usize,
    pub p: usize,
    pub weight: BigUint,
    /// `wt(f) / 2^{n-1}`.
    pub weight_ratio: f64,
    pub sens_total: BigUint,
    pub sens_avg: BigRational,
    /// `σ_av(f) / n`.
    pub sens_ratio: f64,
}

impl AsymptoticRow {
    pub fn compute(params: &LacedParams) -> Self {
        let counter = ExclusionCounter::new(*params);
        let weight = weight_with(&counter);
        let report = SensitivityReport::new(params.n(), sensitivity_total_with(&counter), None);
        let n = params.n();
        let weight_ratio = BigRational::new(BigInt::from(weight.clone()), BigInt::from(1) << (n - 1));
        let sens_ratio = &report.average / BigRational::from_integer(BigInt::from(n));
        Self {
            n,
            p: params.p(),
            weight,
            weight_ratio: weight_ratio.to_f64().unwrap_or(f64::NAN),
            sens_total: report.total_flips,
            sens_avg: report.average,
            sens_ratio: sens_ratio.to_f64().unwrap_or(f64::NAN),
        }
    }
}

/// One row per requested `n`, in input order. Invalid `n` yields an error for
/// that row only.
pub fn asymptotic_table(n_values: &[usize]) -> Vec<Result<AsymptoticRow>> {
    n_values
        .par_iter()
        .map(|&n| LacedParams::new(n).map(|params| AsymptoticRow::compute(&params)))
        .collect()
}
