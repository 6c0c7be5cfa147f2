//! Distinct-coordinate sieve over cycle types, additive character sums and the
//! bounds they yield for distinct-element subset sums in `Z_p`.
//!
//! A sum over `k`-tuples with pairwise-distinct entries is rewritten as a
//! signed sum over the conjugacy classes of `S_k`:
//!
//! ```text
//! N = Σ_{types c of k} (-1)^{k - l(c)} · |class(c)| · F_c
//! ```
//!
//! where `F_c` counts tuples that are constant on the cycles of a permutation
//! of type `c`. Two backends evaluate `F_c`: an exact one by cyclic convolution
//! of residue-count vectors, and a floating one through additive characters.
//! The exact backend is authoritative.

use std::f64::consts::TAU;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::counting::{count_k_subsets_mod_p, ResidueMultiset};
use crate::error::{Error, Result};
use crate::modmath::{binomial, factorial, falling_factorial, generalized_binomial, generalized_binomial_exact};

/// Float tolerances shared by every floating comparison in the crate.
pub mod tolerance {
    /// Absolute tolerance for a single character sum.
    pub const CHARACTER_SUM: f64 = 1e-9;
    /// Relative tolerance (times the magnitude `(n)_k`) for assembled sieve sums.
    pub const ASSEMBLED_RELATIVE: f64 = 1e-6;
    /// Slack added to the right-hand side of the bound checks, since `Φ(D)` is a float.
    pub const BOUND_SLACK: f64 = 1e-6;
}

/// Largest `k` for which cycle types are enumerated.
pub const MAX_TYPE_SIZE: usize = 40;

/// Cycle type `(c_1, …, c_k)` of a permutation in `S_k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PermutationType {
    /// `counts[i - 1] = c_i`, the number of `i`-cycles.
    counts: Vec<usize>,
}

impl PermutationType {
    /// Builds a type from `(c_1, …, c_k)`; requires `Σ i·c_i = k >= 1`.
    pub fn new(counts: Vec<usize>) -> Result<Self> {
        let k = counts.len();
        let weight: usize = counts.iter().enumerate().map(|(i, &c)| (i + 1) * c).sum();
        if k == 0 || weight != k {
            return Err(Error::Invalid(format!("cycle counts {counts:?} do not describe a permutation of {k} points")));
        }
        Ok(Self { counts })
    }

    fn from_parts(k: usize, parts: &[usize]) -> Self {
        let mut counts = vec![0; k];
        for &part in parts {
            counts[part - 1] += 1;
        }
        Self { counts }
    }

    pub fn k(&self) -> usize {
        self.counts.len()
    }

    /// `c_i` for `1 <= i <= k`.
    pub fn cycles_of_length(&self, i: usize) -> usize {
        self.counts[i - 1]
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// Number of cycles `l`, fixed points included.
    pub fn length(&self) -> usize {
        self.counts.iter().sum()
    }

    /// `(-1)^{k - l}`.
    pub fn sign(&self) -> i32 {
        if (self.k() - self.length()).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Cycle lengths in non-increasing order.
    pub fn parts(&self) -> Vec<usize> {
        (1..=self.k()).rev().flat_map(|i| std::iter::repeat_n(i, self.counts[i - 1])).collect()
    }
}

/// All cycle types of `S_k`, one per integer partition of `k`, in
/// lexicographically decreasing order of the part lists.
pub fn enumerate_types(k: usize) -> Result<Vec<PermutationType>> {
    if k == 0 || k > MAX_TYPE_SIZE {
        return Err(Error::TypeCap { k, cap: MAX_TYPE_SIZE });
    }
    fn extend(k: usize, left: usize, max_part: usize, parts: &mut Vec<usize>, out: &mut Vec<PermutationType>) {
        if left == 0 {
            out.push(PermutationType::from_parts(k, parts));
            return;
        }
        for part in (1..=left.min(max_part)).rev() {
            parts.push(part);
            extend(k, left - part, part, parts, out);
            parts.pop();
        }
    }
    let mut out = Vec::new();
    extend(k, k, k, &mut Vec::with_capacity(k), &mut out);
    Ok(out)
}

/// Size of the conjugacy class: `k! / Π_i (i^{c_i} · c_i!)`.
pub fn type_count(t: &PermutationType) -> BigUint {
    let denominator = t
        .counts
        .iter()
        .enumerate()
        .fold(BigUint::one(), |acc, (i, &c)| acc * BigUint::from(i + 1).pow(c as u32) * factorial(c));
    let k_fact = factorial(t.k());
    debug_assert!((&k_fact % &denominator).is_zero());
    k_fact / denominator
}

/// Both sides of `Σ_c |class(c)| · q^{l(c)} = (q + k - 1)_k`.
pub fn cycle_index_identity_check(k: usize, q: u64) -> Result<(BigUint, BigUint)> {
    let lhs = enumerate_types(k)?
        .iter()
        .map(|t| type_count(t) * BigUint::from(q).pow(t.length() as u32))
        .sum();
    let rhs = falling_factorial(q as i64 + k as i64 - 1, k)
        .to_biguint()
        .expect("rising products of non-negative integers are non-negative");
    Ok((lhs, rhs))
}

fn cyclic_convolve(a: &[BigUint], b: &[BigUint]) -> Vec<BigUint> {
    let p = a.len();
    let mut out = vec![BigUint::zero(); p];
    for (s, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        for (t, y) in b.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
            out[(s + t) % p] += x * y;
        }
    }
    out
}

/// Number of ways to give every cycle of a type-`t` permutation one element
/// `y_j ∈ D` such that `Σ_j len_j · y_j ≡ b (mod p)`. Cycles are distinguishable
/// slots; the class size is applied by the caller.
pub fn type_restricted_count(t: &PermutationType, d: &ResidueMultiset, b: usize) -> Result<BigUint> {
    d.check_residue(b)?;
    d.ensure_distinct()?;
    let p = d.p();
    let mut acc = vec![BigUint::zero(); p];
    acc[0] = BigUint::one();
    for (idx, &c) in t.counts.iter().enumerate().filter(|(_, &c)| c > 0) {
        let len = idx + 1;
        let mut per_cycle = vec![BigUint::zero(); p];
        for &a in d.elements() {
            per_cycle[(len * a) % p] += 1u32;
        }
        for _ in 0..c {
            acc = cyclic_convolve(&acc, &per_cycle);
        }
    }
    Ok(acc.swap_remove(b))
}

/// Exact number of ordered `k`-tuples of pairwise-distinct elements of `D`
/// summing to `b`, via the signed sum over cycle types.
pub fn sieve_distinct_count(d: &ResidueMultiset, b: usize, k: usize) -> Result<BigUint> {
    d.check_residue(b)?;
    d.ensure_distinct()?;
    if k == 0 {
        return Ok(BigUint::from((b == 0) as u32));
    }
    let mut total = BigInt::zero();
    for t in enumerate_types(k)? {
        let term = BigInt::from(type_count(&t) * type_restricted_count(&t, d, b)?);
        if t.sign() > 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    Ok(total.to_biguint().expect("the sieve counts tuples, so the signed sum is non-negative"))
}

/// Additive character `χ_t(a) = exp(2πi·t·a/p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CharacterIndex {
    t: usize,
    p: usize,
}

impl CharacterIndex {
    pub fn new(t: usize, p: usize) -> Result<Self> {
        if t >= p {
            return Err(Error::ResidueOutOfRange { value: t, p });
        }
        Ok(Self { t, p })
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn is_trivial(&self) -> bool {
        self.t == 0
    }

    pub fn eval(&self, a: usize) -> Complex64 {
        unit_root((self.t * (a % self.p)) % self.p, self.p)
    }
}

fn unit_root(r: usize, p: usize) -> Complex64 {
    Complex64::from_polar(1.0, TAU * r as f64 / p as f64)
}

/// `Σ_{a ∈ D} χ_t(a)^i`.
pub fn power_sum(d: &ResidueMultiset, t: CharacterIndex, i: usize) -> Result<Complex64> {
    if t.p != d.p() {
        return Err(Error::Invalid(format!("character modulus {} differs from set modulus {}", t.p, d.p())));
    }
    let p = d.p();
    let scale = (t.t * (i % p)) % p;
    Ok(d.elements().iter().map(|&a| unit_root((scale * a) % p, p)).sum())
}

/// `Φ(D)` and the smallest nontrivial character attaining it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiasReport {
    pub phi: f64,
    pub witness: CharacterIndex,
}

/// `Φ(D) = max_{t ≠ 0} |Σ_{a ∈ D} χ_t(a)|`.
pub fn fourier_bias(d: &ResidueMultiset) -> BiasReport {
    let p = d.p();
    let mut best = BiasReport { phi: f64::NEG_INFINITY, witness: CharacterIndex { t: 1, p } };
    for t in 1..p {
        let witness = CharacterIndex { t, p };
        let phi = power_sum(d, witness, 1).expect("same modulus").norm();
        // Conjugate characters have equal magnitudes up to rounding; keep the smaller t.
        if phi > best.phi + tolerance::CHARACTER_SUM {
            best = BiasReport { phi, witness };
        }
    }
    best
}

/// The distinct-tuple count through the full character expansion:
/// `N = (n)_k/p + (1/p) Σ_{t≠0} χ_t(-b) Σ_c sign(c)|class(c)| Π_i (Σ_a χ_t(a)^i)^{c_i}`.
pub fn character_sieve_count(d: &ResidueMultiset, b: usize, k: usize) -> Result<f64> {
    d.check_residue(b)?;
    d.ensure_distinct()?;
    let p = d.p();
    let n = d.len();
    let magnitude = falling_factorial(n as i64, k).to_f64().unwrap_or(f64::INFINITY);
    if k == 0 {
        return Ok((b == 0) as u32 as f64);
    }
    let types = enumerate_types(k)?;
    let weights: Vec<f64> = types
        .iter()
        .map(|t| t.sign() as f64 * type_count(t).to_f64().unwrap_or(f64::INFINITY))
        .collect();
    let mut nontrivial = Complex64::zero();
    for t in 1..p {
        let chi = CharacterIndex { t, p };
        let sums: Vec<Complex64> = (1..=k).map(|i| power_sum(d, chi, i).expect("same modulus")).collect();
        let inner: Complex64 = types
            .iter()
            .zip(&weights)
            .map(|(ty, &w)| {
                ty.counts
                    .iter()
                    .enumerate()
                    .fold(Complex64::new(w, 0.0), |acc, (i, &c)| acc * sums[i].powu(c as u32))
            })
            .sum();
        nontrivial += chi.eval(b).conj() * inner;
    }
    let value = Complex64::new(magnitude, 0.0) / p as f64 + nontrivial / p as f64;
    let tol = tolerance::ASSEMBLED_RELATIVE * magnitude.max(1.0);
    if value.im.abs() > tol {
        return Err(Error::NumericalFault { residual: value.im.abs(), tolerance: tol });
    }
    Ok(value.re)
}

/// Exact `N/k!` set against `(1/p)·C(n, k) - C(Φ(D) + k - 1, k)`.
///
/// The bound controls `|Σ_a χ^i(a)|` by `Φ(D)` for every `i <= k`, which needs
/// `χ^i` nontrivial, i.e. `k < p`. For `k >= p` it can fail: with `D = Z_5`,
/// `k = 5` the only 5-subset sums to 0, yet the right side is `1/5` for every `b`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub exact_over_kfact: BigRational,
    pub rhs: f64,
    pub phi: f64,
    pub holds: bool,
    /// `k < p`, the range in which the bound is guaranteed.
    pub k_below_p: bool,
}

pub fn distinct_sum_lower_bound(d: &ResidueMultiset, b: usize, k: usize) -> Result<BoundReport> {
    d.check_residue(b)?;
    d.ensure_distinct()?;
    let exact = BigRational::from_integer(BigInt::from(count_k_subsets_mod_p(d, k).get(b).clone()));
    let phi = fourier_bias(d).phi.max(0.0);
    let main = binomial(d.len(), k).to_f64().unwrap_or(f64::INFINITY) / d.p() as f64;
    let rhs = main - generalized_binomial(phi, k);
    let holds = exact.to_f64().unwrap_or(f64::INFINITY) >= rhs - tolerance::BOUND_SLACK;
    Ok(BoundReport { exact_over_kfact: exact, rhs, phi, holds, k_below_p: k < d.p() })
}

/// `(1/p)·C(p - c, k) - C(c + k - 1, k)`, exactly. At `k = 0` this is the
/// literal `1/p - 1`.
pub fn complement_lower_bound(p: usize, c: usize, k: usize) -> Result<BigRational> {
    if c >= p {
        return Err(Error::Invalid(format!("need c < p, got c = {c}, p = {p}")));
    }
    if k > p - c {
        return Err(Error::Invalid(format!("need k <= p - c = {}, got k = {k}", p - c)));
    }
    let main = BigRational::new(BigInt::from(binomial(p - c, k)), BigInt::from(p));
    Ok(main - BigRational::from_integer(generalized_binomial_exact(c as i64, k)))
}

/// Outcome of the smoothness test `Φ(D) <= C·sqrt(|D|·ln(ambient))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothnessReport {
    pub smooth: bool,
    /// `Φ(D) / sqrt(|D|·ln(ambient))`.
    pub ratio: f64,
    pub phi: f64,
}

pub fn is_smooth(d: &ResidueMultiset, ambient_size: usize, constant: f64) -> Result<SmoothnessReport> {
    if d.is_empty() || ambient_size < d.len() {
        return Err(Error::Invalid(format!(
            "need ambient_size >= |D| >= 1, got ambient_size = {ambient_size}, |D| = {}",
            d.len()
        )));
    }
    let phi = fourier_bias(d).phi;
    let scale = (d.len() as f64 * (ambient_size as f64).ln()).sqrt();
    let ratio = if phi <= tolerance::CHARACTER_SUM {
        0.0
    } else if scale == 0.0 {
        f64::INFINITY
    } else {
        phi / scale
    };
    Ok(SmoothnessReport { smooth: ratio <= constant, ratio, phi })
}
