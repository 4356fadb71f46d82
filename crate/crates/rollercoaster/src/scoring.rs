//! The total-switches objective t(π): the sum of [`switch_count`] over all
//! 2^n subsequences of π. Roller coaster permutations are the argmax of t
//! over Sₙ.
//!
//! Two evaluation routes are provided. [`total_switches_brute`] enumerates
//! every position subset and is the ground-truth oracle. The fast route rests
//! on a reweighting: an index triple i < j < k with a direction change at j
//! contributes a switch to exactly those subsequences that pick i, j, k
//! consecutively, which forbids picking anything strictly between i and j or
//! between j and k while leaving the i−1 earlier and n−k later positions
//! free. Hence
//!
//! ```text
//! t(π) = Σ_{i<j<k, (πⱼ−πᵢ)(πₖ−πⱼ)<0} 2^(i−1) · 2^(n−k)
//! ```
//!
//! [`total_switches_fast`] evaluates this in O(n²) by accumulating, for each
//! middle index j, the weighted counts of smaller/larger values to its left
//! and right.

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::perm::{switch_count, Permutation};

/// Hard ceiling for the 2^n brute-force scan.
pub const BRUTE_MAX_N: usize = 20;

/// Largest n for which the 128-bit accumulator is provably exact:
/// t(π) ≤ C(n,3)·2^(n−3) < 2^128 holds up to here.
pub const FAST_EXACT_MAX_N: usize = 113;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScoreError {
    #[error("brute-force scoring is limited to n ≤ {max}, got n = {n} (override to force)")]
    BruteGuard { n: usize, max: usize },
    #[error("fast scoring is exact only for n ≤ {max} with 128-bit accumulation, got n = {n}")]
    ExactWidthExceeded { n: usize, max: usize },
}

/// Which route produced a score.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize)]
pub enum Method {
    #[serde(rename = "brute")]
    Brute,
    #[serde(rename = "fast")]
    Fast,
}

/// A permutation's switch statistics.
///
/// `total_switches` is serialized as a decimal string: it outgrows 64-bit
/// integers (and JSON number interop) long before the supported n limit.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ScoreReport {
    pub perm: Permutation,
    #[serde(serialize_with = "u128_as_string")]
    pub total_switches: u128,
    pub own_switches: usize,
    pub method: Method,
}

fn u128_as_string<S: Serializer>(v: &u128, serializer: S) -> Result<S::Ok, S::Error> {
    serializer.serialize_str(&v.to_string())
}

/// Sums switch counts over every one of the 2^n subsequences of `p`.
/// Guarded at n ≤ [`BRUTE_MAX_N`]; see [`total_switches_brute_unguarded`].
pub fn total_switches_brute(p: &Permutation) -> Result<ScoreReport, ScoreError> {
    if p.n() > BRUTE_MAX_N {
        return Err(ScoreError::BruteGuard {
            n: p.n(),
            max: BRUTE_MAX_N,
        });
    }
    Ok(total_switches_brute_unguarded(p))
}

/// The brute-force scan without the size guard. 2^n·n work; the caller owns
/// the consequences.
pub fn total_switches_brute_unguarded(p: &Permutation) -> ScoreReport {
    ScoreReport {
        total_switches: brute_total(p.values()),
        own_switches: switch_count(p.values()),
        perm: p.clone(),
        method: Method::Brute,
    }
}

fn brute_total(values: &[u32]) -> u128 {
    let n = values.len();
    let mut total = 0u128;
    for mask in 0u32..(1u32 << n) {
        let mut prev: Option<u32> = None;
        let mut rising: Option<bool> = None;
        for (i, &v) in values.iter().enumerate() {
            if mask & (1 << i) == 0 {
                continue;
            }
            if let Some(pv) = prev {
                let r = v > pv;
                if let Some(pr) = rising {
                    if r != pr {
                        total += 1;
                    }
                }
                rising = Some(r);
            }
            prev = Some(v);
        }
    }
    total
}

/// Polynomial evaluation of t(π) via the weighted-triple identity.
/// Exact for n ≤ [`FAST_EXACT_MAX_N`].
pub fn total_switches_fast(p: &Permutation) -> Result<ScoreReport, ScoreError> {
    if p.n() > FAST_EXACT_MAX_N {
        return Err(ScoreError::ExactWidthExceeded {
            n: p.n(),
            max: FAST_EXACT_MAX_N,
        });
    }
    Ok(ScoreReport {
        total_switches: fast_total(p.values()),
        own_switches: switch_count(p.values()),
        perm: p.clone(),
        method: Method::Fast,
    })
}

/// Allocation-free core of the fast scorer; `values` must be distinct and
/// `values.len() ≤ FAST_EXACT_MAX_N`.
///
/// For each middle index j, a switch triple needs either both neighbors
/// smaller (peak) or both larger (valley), so the triple sum factors into
/// left·right products of weighted counts.
pub(crate) fn fast_total(values: &[u32]) -> u128 {
    let n = values.len();
    let mut total = 0u128;
    for j in 1..n.saturating_sub(1) {
        let vj = values[j];
        let mut left_less = 0u128;
        let mut left_more = 0u128;
        for (i, &vi) in values[..j].iter().enumerate() {
            // position i+1 (1-based) leaves i free slots before it
            let w = 1u128 << i;
            if vi < vj {
                left_less += w;
            } else {
                left_more += w;
            }
        }
        let mut right_less = 0u128;
        let mut right_more = 0u128;
        for (off, &vk) in values[j + 1..].iter().enumerate() {
            let k = j + 1 + off;
            let w = 1u128 << (n - 1 - k);
            if vk < vj {
                right_less += w;
            } else {
                right_more += w;
            }
        }
        total += left_less * right_less + left_more * right_more;
    }
    total
}
