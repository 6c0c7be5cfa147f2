//! Seeded three-way agreement trials for the distinct-coordinate sieve.

use laced::brute::Brute;
use laced::counting::count_k_subsets_mod_p;
use laced::modmath::{factorial, is_prime};
use laced::sieve::{character_sieve_count, distinct_sum_lower_bound, sieve_distinct_count};
use laced::{Error, ResidueMultiset};
use num_traits::ToPrimitive;
use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{render_set, Outcome, OutputRecord};

pub const TRIAL_PRIMES: [usize; 4] = [5, 7, 11, 13];
pub const MAX_RANDOM_SIZE: usize = 8;
pub const MAX_RANDOM_K: usize = 5;

/// One duplicate-free set with a summand count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub set: ResidueMultiset,
    pub k: usize,
}

/// Per-instance agreement summary over every residue `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceCheck {
    /// Sieve, enumeration and `k!`·DP agree for every `b`.
    pub exact_agree: bool,
    /// The character expansion rounds to the exact count for every `b`.
    pub character_agree: bool,
    /// The bias lower bound holds for every `b`.
    pub bound_holds: bool,
    /// `k < p`, where the bound is guaranteed to hold.
    pub k_below_p: bool,
}

impl InstanceCheck {
    pub fn passed(&self) -> bool {
        self.exact_agree && self.character_agree && self.bound_holds
    }
}

/// Deterministic instances for a seed. Unset parameters are drawn per trial.
pub fn generate_instances(
    seed: u64,
    trials: usize,
    p: Option<usize>,
    size: Option<usize>,
    k: Option<usize>,
) -> laced::Result<Vec<Instance>> {
    if let Some(p) = p {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if let Some(size) = size {
            if size > p {
                return Err(Error::Invalid(format!("--size {size} exceeds p = {p}")));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(trials);
    for _ in 0..trials {
        let p = p.unwrap_or_else(|| *TRIAL_PRIMES.choose(&mut rng).expect("non-empty"));
        let size = match size {
            Some(s) if s > p => return Err(Error::Invalid(format!("--size {s} exceeds p = {p}"))),
            Some(s) => s,
            None => rng.gen_range(1..=MAX_RANDOM_SIZE.min(p)),
        };
        let k = k.unwrap_or_else(|| rng.gen_range(1..=MAX_RANDOM_K));
        let mut elements = index::sample(&mut rng, p, size).into_vec();
        elements.sort_unstable();
        out.push(Instance { set: ResidueMultiset::new(p, elements)?, k });
    }
    Ok(out)
}

pub fn check_instance(instance: &Instance, brute: &Brute) -> laced::Result<InstanceCheck> {
    let Instance { set, k } = instance;
    let k = *k;
    let table = count_k_subsets_mod_p(set, k);
    let k_fact = factorial(k);
    let mut check = InstanceCheck { exact_agree: true, character_agree: true, bound_holds: true, k_below_p: k < set.p() };
    for b in 0..set.p() {
        let sieve = sieve_distinct_count(set, b, k)?;
        let enumerated = brute.count_distinct_tuples(set, b, k)?;
        let dp = &k_fact * table.get(b);
        check.exact_agree &= sieve == enumerated && sieve == dp;
        check.character_agree &= match character_sieve_count(set, b, k) {
            Ok(approx) => (approx - sieve.to_f64().unwrap_or(f64::INFINITY)).abs() < 0.5,
            Err(Error::NumericalFault { .. }) => false,
            Err(e) => return Err(e),
        };
        check.bound_holds &= distinct_sum_lower_bound(set, b, k)?.holds;
    }
    Ok(check)
}

pub(crate) fn sieve_verify(
    p: Option<usize>,
    size: Option<usize>,
    k: Option<usize>,
    trials: usize,
    seed: u64,
) -> laced::Result<Outcome> {
    let instances = generate_instances(seed, trials, p, size, k)?;
    let brute = Brute::default();
    let mut records = Vec::with_capacity(trials + 1);
    let (mut agreements, mut character_failures) = (0usize, 0usize);
    let (mut bound_violations, mut guaranteed_violations) = (0usize, 0usize);
    for (trial, inst) in instances.iter().enumerate() {
        let check = check_instance(inst, &brute)?;
        agreements += check.exact_agree as usize;
        character_failures += !check.character_agree as usize;
        bound_violations += !check.bound_holds as usize;
        guaranteed_violations += (!check.bound_holds && check.k_below_p) as usize;
        records.push(
            OutputRecord::new("sieve-verify")
                .param("trial", trial)
                .param("p", inst.set.p())
                .param("set", render_set(&inst.set))
                .param("k", inst.k)
                .result("exact_agree", check.exact_agree)
                .result("character_agree", check.character_agree)
                .result("bound_holds", check.bound_holds)
                .result("k_below_p", check.k_below_p),
        );
    }
    records.push(
        OutputRecord::new("sieve-verify-summary")
            .param("seed", seed)
            .param("trials", trials)
            .result("agreements", agreements)
            .result("character_failures", character_failures)
            .result("bound_violations", bound_violations)
            .result("bound_violations_k_below_p", guaranteed_violations),
    );
    let passed = agreements == trials && character_failures == 0 && bound_violations == 0;
    Ok(Outcome::checked(records, passed, "verification failed: sieve backends disagree"))
}
