//! Exact analysis of the weighted-sum ("laced") Boolean function.
//!
//! For `n` variables and `p` the least prime `>= n`, the function reads the
//! coordinate indexed by the weighted sum `Σ k·x_k mod p`. This crate computes
//! its weight and average sensitivity exactly in polynomial time through
//! subset-sum counting mod `p`, and cross-checks them against exhaustive
//! enumeration. It also provides the distinct-coordinate sieve over cycle
//! types of `S_k`, additive character sums, the Fourier bias of a residue set,
//! and the lower bounds on distinct-element subset-sum counts derived from it.

pub mod analysis;
pub mod brute;
pub mod counting;
mod error;
pub mod laced;
pub mod modmath;
pub mod sieve;

pub use analysis::{asymptotic_table, avg_sensitivity_exact, weight_exact, AsymptoticRow};
pub use brute::{Brute, SensitivityReport};
pub use counting::{count_k_subsets_mod_p, count_subsets_mod_p, ResidueMultiset, SumCountTable};
pub use error::{Error, Result};
pub use laced::{eval_f, flip, s_of, InputVector};
pub use modmath::{least_prime_geq, LacedParams, ShiftedResidue};
