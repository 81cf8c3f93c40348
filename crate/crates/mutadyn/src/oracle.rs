//! Brute-force enumeration of the exact outcome distribution of a mutation
//! system after `n` steps.
//!
//! Each step expands every (word, probability) pair over all (position,
//! rule) choices, weighting by `1/|word|` times the rule probability, and
//! merges duplicate words immediately to keep the frontier small. Rational
//! addition is associative and commutative, so the merge order cannot
//! change any sum; everything here is exact, which is the point — this
//! module is the ground truth the closed-form machinery is tested against.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::law::MutationLaw;
use crate::words::{count_vector, tuple_count, Word};
use crate::{Error, Rat, Result};

/// Default cap on enumerated (word, probability) pairs per step.
pub const DEFAULT_OUTCOME_CAP: usize = 1_000_000;

/// Exact distribution over outcome words, deduplicated by word content.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutcomeDistribution {
    outcomes: BTreeMap<Word, Rat>,
}

impl OutcomeDistribution {
    /// Point mass on a single word.
    pub fn point(w: Word) -> Self {
        let mut outcomes = BTreeMap::new();
        outcomes.insert(w, Rat::one());
        OutcomeDistribution { outcomes }
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    /// Outcomes in lexicographic word order.
    pub fn iter(&self) -> impl Iterator<Item = (&Word, &Rat)> {
        self.outcomes.iter()
    }

    pub fn probability_of(&self, w: &Word) -> Rat {
        self.outcomes.get(w).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn total_mass(&self) -> Rat {
        self.outcomes.values().cloned().sum()
    }

    /// Exact expected k-tuple count vector `E[ct]` under this distribution.
    pub fn expected_count(&self, k: usize, d: usize) -> Vec<Rat> {
        let dim = tuple_count(d, k).expect("tuple space overflows usize");
        let mut acc = vec![Rat::zero(); dim];
        for (word, p) in &self.outcomes {
            for (slot, c) in acc.iter_mut().zip(count_vector(word, k, d).counts()) {
                if *c > 0 {
                    *slot += p * Rat::from_integer(BigInt::from(*c));
                }
            }
        }
        acc
    }

    /// Exact expected k-tuple frequency vector `E[fr]` — the expectation of
    /// the ratio, which for varying-length laws differs from
    /// `E[ct] / E[length]`.
    pub fn expected_frequency(&self, k: usize, d: usize) -> Vec<Rat> {
        let dim = tuple_count(d, k).expect("tuple space overflows usize");
        let mut acc = vec![Rat::zero(); dim];
        for (word, p) in &self.outcomes {
            if k > word.len() {
                continue;
            }
            let len = Rat::from_integer(BigInt::from(word.len()));
            for (slot, c) in acc.iter_mut().zip(count_vector(word, k, d).counts()) {
                if *c > 0 {
                    *slot += p * Rat::from_integer(BigInt::from(*c)) / len.clone();
                }
            }
        }
        acc
    }

    /// Exact expected word length.
    pub fn expected_length(&self) -> Rat {
        self.outcomes
            .iter()
            .map(|(w, p)| p * Rat::from_integer(BigInt::from(w.len())))
            .sum()
    }

    /// `E[ct] / E[length]`, the normalized expected count. For fixed-length
    /// laws this equals `E[fr]`; for varying-length laws the two are
    /// distinct random-denominator objects and both are reported.
    pub fn normalized_expected_count(&self, k: usize, d: usize) -> Vec<Rat> {
        let len = self.expected_length();
        self.expected_count(k, d).into_iter().map(|c| c / len.clone()).collect()
    }
}

/// Exact push-forward of `n` mutation steps applied to `w`.
///
/// Errors with [`Error::OutcomeCap`] when a step would expand more than
/// `cap` (word, probability) pairs.
pub fn enumerate_distribution(
    law: &MutationLaw,
    w: &Word,
    n: usize,
    cap: usize,
) -> Result<OutcomeDistribution> {
    let mut current = OutcomeDistribution::point(w.clone());
    for _ in 0..n {
        let mut next: BTreeMap<Word, Rat> = BTreeMap::new();
        let mut pairs = 0usize;
        for (word, p) in &current.outcomes {
            let m = word.len();
            let step_weight = p / Rat::from_integer(BigInt::from(m));
            for i in 0..m {
                for rule in law.rules_for(word.symbol(i)) {
                    pairs += 1;
                    if pairs > cap {
                        return Err(Error::OutcomeCap { cap });
                    }
                    let outcome = word.spliced(i, rule.replacement.symbols());
                    let weight = &step_weight * &rule.probability;
                    *next.entry(outcome).or_insert_with(Rat::zero) += weight;
                }
            }
        }
        current = OutcomeDistribution { outcomes: next };
    }
    Ok(current)
}

/// Expected k-tuple frequencies after `n` steps, unfolded over the full
/// outcome distribution.
pub fn oracle_expected_frequency(
    law: &MutationLaw,
    w: &Word,
    k: usize,
    n: usize,
    cap: usize,
) -> Result<Vec<Rat>> {
    let dist = enumerate_distribution(law, w, n, cap)?;
    Ok(dist.expected_frequency(k, law.alphabet().d()))
}
