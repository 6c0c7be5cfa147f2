//! Prime selection, canonical residues and factorial-style arithmetic.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Deterministic trial-division primality test.
pub fn is_prime(m: usize) -> bool {
    if m < 2 {
        return false;
    }
    if m < 4 {
        return true;
    }
    if m.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= m {
        if m.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Smallest prime `p >= n`.
pub fn least_prime_geq(n: usize) -> Result<usize> {
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    Ok((n..).find(|&m| is_prime(m)).expect("primes are unbounded"))
}

/// The instance `(n, p)`: `n` Boolean variables, `p` the least prime `>= n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LacedParams {
    n: usize,
    p: usize,
}

impl LacedParams {
    pub fn new(n: usize) -> Result<Self> {
        let p = least_prime_geq(n)?;
        Ok(Self { n, p })
    }

    /// Validates an explicitly supplied modulus against `n`.
    pub fn with_modulus(n: usize, p: usize) -> Result<Self> {
        let expected = least_prime_geq(n)?;
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p != expected {
            return Err(Error::WrongModulus { n, p, expected });
        }
        Ok(Self { n, p })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }
}

/// A residue mod `p` represented in `[1, p]`, with `0` shown as `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ShiftedResidue(usize);

impl ShiftedResidue {
    pub fn value(self) -> usize {
        self.0
    }
}

/// The unique `r` in `[1, p]` with `r ≡ v (mod p)`.
pub fn shifted_residue(v: i64, p: usize) -> ShiftedResidue {
    let r = v.rem_euclid(p as i64) as usize;
    ShiftedResidue(if r == 0 { p } else { r })
}

/// Standard residue in `[0, p)`.
pub fn residue(v: i64, p: usize) -> usize {
    v.rem_euclid(p as i64) as usize
}

/// `(x)_k = x (x-1) ... (x-k+1)` over the integers.
pub fn falling_factorial(x: i64, k: usize) -> BigInt {
    (0..k as i64).fold(BigInt::one(), |acc, j| acc * BigInt::from(x - j))
}

/// `(x)_k` for real `x`.
pub fn falling_factorial_f64(x: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (x - j as f64))
}

pub fn factorial(k: usize) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, j| acc * BigUint::from(j))
}

/// Ordinary binomial coefficient; zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    // Each partial product is itself a binomial coefficient, so the division is exact.
    (0..k).fold(BigUint::one(), |acc, j| acc * BigUint::from(n - j) / BigUint::from(j + 1))
}

/// `(x + k - 1)_k / k!` for real `x`; for integer `x >= 0` this is `C(x + k - 1, k)`.
pub fn generalized_binomial(x: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (x + j as f64) / (j + 1) as f64)
}

/// Exact `(x + k - 1)_k / k!` for integer `x`.
pub fn generalized_binomial_exact(x: i64, k: usize) -> BigInt {
    falling_factorial(x + k as i64 - 1, k) / BigInt::from(factorial(k))
}
