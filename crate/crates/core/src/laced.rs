//! The laced (weighted-sum) Boolean function and its pointwise evaluation.
//!
//! Coordinates are 1-based on the public surface: coordinate `k` carries the
//! weight `k`, and `s(X)` is `Σ k·x_k` reduced into `[1, p]`. The function reads
//! `x_{s(X)}` when `s(X) <= n` and falls back to `x_1` otherwise. When `p = n`
//! the fallback is unreachable.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::modmath::{shifted_residue, LacedParams, ShiftedResidue};

/// A point of `Z_2^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InputVector {
    bits: Vec<bool>,
}

impl InputVector {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn zeros(n: usize) -> Self {
        Self { bits: vec![false; n] }
    }

    /// Decodes the compact encoding: bit `k` of `mask` is `x_{k+1}`.
    pub fn from_mask(mask: u64, n: usize) -> Self {
        assert!(n <= 64, "mask encoding holds at most 64 coordinates");
        Self { bits: (0..n).map(|k| mask >> k & 1 == 1).collect() }
    }

    /// Compact encoding; `None` when `n > 64`.
    pub fn to_mask(&self) -> Option<u64> {
        if self.bits.len() > 64 {
            return None;
        }
        Some(self.bits.iter().enumerate().fold(0, |m, (k, &b)| m | (b as u64) << k))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// `x_i`, 1-based.
    pub fn bit(&self, i: usize) -> Result<bool> {
        self.check_index(i)?;
        Ok(self.bits[i - 1])
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.bits.len() {
            return Err(Error::IndexOutOfRange { index: i, n: self.bits.len() });
        }
        Ok(())
    }

    fn check_params(&self, params: &LacedParams) -> Result<()> {
        if self.bits.len() != params.n() {
            return Err(Error::LengthMismatch { expected: params.n(), got: self.bits.len() });
        }
        Ok(())
    }
}

impl FromStr for InputVector {
    type Err = Error;

    /// Leftmost character is `x_1`.
    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidBit(other)),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }
}

impl fmt::Display for InputVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// `s(X)`: the weighted sum `Σ k·x_k` reduced into `[1, p]`.
pub fn s_of(params: &LacedParams, x: &InputVector) -> Result<ShiftedResidue> {
    x.check_params(params)?;
    let p = params.p();
    let sum = x
        .bits
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .fold(0usize, |acc, (k, _)| (acc + k + 1) % p);
    Ok(shifted_residue(sum as i64, p))
}

/// `f(X)`.
pub fn eval_f(params: &LacedParams, x: &InputVector) -> Result<bool> {
    let s = s_of(params, x)?.value();
    Ok(x.bits[read_index(params.n(), s) - 1])
}

/// The coordinate read by `f` when `s(X) = s`.
pub fn read_index(n: usize, s: usize) -> usize {
    if s <= n {
        s
    } else {
        1
    }
}

/// `X^{(i)}`: a copy of `x` with coordinate `i` (1-based) negated.
pub fn flip(x: &InputVector, i: usize) -> Result<InputVector> {
    x.check_index(i)?;
    let mut out = x.clone();
    out.bits[i - 1] = !out.bits[i - 1];
    Ok(out)
}

/// Mask-based evaluator for enumeration over `Z_2^n`, `n <= 64`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct MaskEvaluator {
    n: usize,
    p: usize,
}

impl MaskEvaluator {
    pub(crate) fn new(params: &LacedParams) -> Self {
        assert!(params.n() <= 64);
        Self { n: params.n(), p: params.p() }
    }

    pub(crate) fn s(&self, mut mask: u64) -> usize {
        let mut sum = 0usize;
        while mask != 0 {
            sum += mask.trailing_zeros() as usize + 1;
            mask &= mask - 1;
        }
        let r = sum % self.p;
        if r == 0 {
            self.p
        } else {
            r
        }
    }

    pub(crate) fn f(&self, mask: u64) -> bool {
        let a = read_index(self.n, self.s(mask));
        mask >> (a - 1) & 1 == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> InputVector {
        s.parse().unwrap()
    }

    fn params(n: usize) -> LacedParams {
        LacedParams::new(n).unwrap()
    }

    #[test]
    fn s_of_examples() {
        assert_eq!(s_of(&params(5), &bits("00000")).unwrap().value(), 5);
        assert_eq!(s_of(&params(5), &bits("10010")).unwrap().value(), 5);
        assert_eq!(s_of(&params(4), &bits("0101")).unwrap().value(), 1);
    }

    #[test]
    fn eval_examples() {
        assert!(!eval_f(&params(2), &bits("00")).unwrap());
        assert!(eval_f(&params(2), &bits("01")).unwrap());
        assert!(eval_f(&params(4), &bits("1000")).unwrap());
    }

    #[test]
    fn length_mismatch_is_rejected() {
        assert_eq!(
            s_of(&params(4), &bits("010")),
            Err(Error::LengthMismatch { expected: 4, got: 3 })
        );
    }

    #[test]
    fn parse_rejects_other_characters() {
        assert_eq!("01x".parse::<InputVector>(), Err(Error::InvalidBit('x')));
        assert_eq!(bits("0110").to_string(), "0110");
    }

    #[test]
    fn flip_examples() {
        assert_eq!(flip(&bits("000"), 2).unwrap(), bits("010"));
        assert_eq!(flip(&bits("11"), 1).unwrap(), bits("01"));
        let x = bits("10110");
        for i in 1..=5 {
            assert_eq!(flip(&flip(&x, i).unwrap(), i).unwrap(), x);
        }
        assert_eq!(flip(&x, 0), Err(Error::IndexOutOfRange { index: 0, n: 5 }));
        assert_eq!(flip(&x, 6), Err(Error::IndexOutOfRange { index: 6, n: 5 }));
    }

    #[test]
    fn flip_shifts_weighted_sum_by_the_index() {
        for n in 1..=12 {
            let pr = params(n);
            let p = pr.p() as i64;
            for mask in 0..1u64 << n {
                let x = InputVector::from_mask(mask, n);
                let s = s_of(&pr, &x).unwrap().value() as i64;
                for i in 1..=n {
                    let s2 = s_of(&pr, &flip(&x, i).unwrap()).unwrap().value() as i64;
                    let delta = if x.bit(i).unwrap() { -(i as i64) } else { i as i64 };
                    assert_eq!((s2 - s - delta).rem_euclid(p), 0);
                }
            }
        }
    }

    #[test]
    fn mask_evaluator_matches_vector_path() {
        for n in 1..=10 {
            let pr = params(n);
            let ev = MaskEvaluator::new(&pr);
            for mask in 0..1u64 << n {
                let x = InputVector::from_mask(mask, n);
                assert_eq!(x.to_mask(), Some(mask));
                assert_eq!(ev.s(mask), s_of(&pr, &x).unwrap().value());
                let f = eval_f(&pr, &x).unwrap();
                assert_eq!(ev.f(mask), f);
                let a = read_index(n, ev.s(mask));
                assert_eq!(f, x.bit(a).unwrap());
            }
        }
    }

    #[test]
    fn fallback_branch_unused_when_modulus_equals_n() {
        for n in [2usize, 3, 5, 7, 11] {
            let pr = params(n);
            assert_eq!(pr.p(), n);
            let ev = MaskEvaluator::new(&pr);
            assert!((0..1u64 << n).all(|m| ev.s(m) <= n));
        }
    }
}
