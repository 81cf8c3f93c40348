//! Exact expected k-tuple counts and frequencies.
//!
//! One mutation step maps expected counts linearly: for any law and any
//! word of length `m ≥ k`,
//!
//! ```text
//! E[ct after one step] = (1/m) (M + (m-k) I) · ct
//! ```
//!
//! where `M` is the k-substitution matrix. For fixed-length laws the word
//! length after `j` steps is the deterministic `m + j(τ-1)`, so the map can
//! be iterated:
//!
//! ```text
//! E[fr after n steps] = (1/(m+n(τ-1))) · Π_{j<n} (M + (m+j(τ-1)-k) I)/(m+j(τ-1)) · ct
//! ```
//!
//! For varying-length laws the denominator is random and the product is
//! invalid, so only the single-step map is exposed; multi-step exact
//! expectations go through [`crate::oracle`].
//!
//! The recursion is evaluated as successive exact matrix-vector products,
//! not by eigendecomposition. Internally the state is kept as an integer
//! numerator vector over one running denominator (`q·M` is integral for
//! `q` the least common multiple of the entry denominators), which is
//! arithmetically identical to reducing after every step but does one gcd
//! per coordinate at the end instead of `n·d^k` of them along the way.
//! Numerator bit-length grows linearly in `n`; the step count is capped.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::law::{LawKind, MutationLaw};
use crate::linalg::Mat;
use crate::matrix::{build_substitution_matrix, SubMatrix};
use crate::words::{count_vector, Word};
use crate::{Error, Rat, Result};

/// Default cap on the step count of the product recursion.
pub const DEFAULT_MAX_STEPS: usize = 100_000;

/// Expected count vector after one mutation step:
/// `(1/m) (M + (m-k) I) · ct` for a word of length `m = word_len`.
///
/// Exact for every law (fixed, average, or general). For laws with constant
/// expected replacement length `τ`, the result sums to `m + τ - 1`.
pub fn step_expected_count(matrix: &SubMatrix, ct: &[Rat], word_len: usize) -> Result<Vec<Rat>> {
    let k = matrix.k();
    if word_len < k {
        return Err(Error::WordShorterThanK { len: word_len, k });
    }
    assert_eq!(ct.len(), matrix.dimension(), "count vector has wrong dimension");
    let m = Rat::from_integer(BigInt::from(word_len));
    let shift = &m - Rat::from_integer(BigInt::from(k));
    Ok(matrix
        .mat()
        .matvec(ct)
        .into_iter()
        .zip(ct)
        .map(|(mv, c)| (mv + &shift * c) / &m)
        .collect())
}

/// Exact product recursion for a fixed-length law, advanced one step at a
/// time. State is the integer numerator vector of `E[ct]` over a running
/// denominator.
pub struct FixedRecursion {
    k: usize,
    tau: usize,
    start_len: usize,
    step: usize,
    /// `q · M` as an integer matrix.
    scaled_matrix: Mat<BigInt>,
    /// Common denominator `q` of the matrix entries.
    q: BigInt,
    /// Numerators of `E[ct]` (over `denom`).
    numer: Vec<BigInt>,
    /// Running denominator `Π_{j<step} q·(m+j(τ-1))`.
    denom: BigInt,
}

impl FixedRecursion {
    /// Sets up the recursion for `law` (which must classify fixed-length),
    /// start word `w` with `|w| ≥ k`, and tuple length `k`.
    pub fn new(law: &MutationLaw, w: &Word, k: usize, max_dim: usize) -> Result<Self> {
        let classification = law.classify();
        if classification.kind != LawKind::FixedLength {
            return Err(Error::NotFixedLength);
        }
        let tau = classification
            .tau
            .as_ref()
            .expect("fixed-length laws have tau")
            .to_integer()
            .to_usize()
            .expect("tau fits in usize");
        if w.len() < k {
            return Err(Error::WordShorterThanK { len: w.len(), k });
        }
        let matrix = build_substitution_matrix(law, k, max_dim)?;

        let q = (0..matrix.dimension())
            .flat_map(|i| (0..matrix.dimension()).map(move |j| (i, j)))
            .fold(BigInt::one(), |acc, (i, j)| acc.lcm(matrix.entry(i, j).denom()));
        let scaled_matrix =
            matrix.mat().map(|e| (e * Rat::from_integer(q.clone())).to_integer());

        let numer =
            count_vector(w, k, law.alphabet().d()).counts().iter().map(|&c| BigInt::from(c)).collect();

        Ok(FixedRecursion {
            k,
            tau,
            start_len: w.len(),
            step: 0,
            scaled_matrix,
            q,
            numer,
            denom: BigInt::one(),
        })
    }

    pub fn step_count(&self) -> usize {
        self.step
    }

    /// Deterministic word length after the steps taken so far:
    /// `m + step·(τ-1)`.
    pub fn word_length(&self) -> usize {
        self.start_len + self.step * (self.tau - 1)
    }

    /// Applies one step of the recursion:
    /// `numer ← (qM + q(len-k) I) · numer`, `denom ← denom · q · len`.
    pub fn advance(&mut self) {
        let len = self.word_length();
        let shift = &self.q * BigInt::from(len as i64 - self.k as i64);
        let mut next = self.scaled_matrix.matvec(&self.numer);
        for (out, cur) in next.iter_mut().zip(&self.numer) {
            *out += &shift * cur;
        }
        self.numer = next;
        self.denom = &self.denom * &self.q * BigInt::from(len);
        self.step += 1;
    }

    /// Exact `E[ct]` at the current step.
    pub fn counts_exact(&self) -> Vec<Rat> {
        self.numer.iter().map(|n| Rat::new(n.clone(), self.denom.clone())).collect()
    }

    /// Exact `E[fr]` at the current step: counts over the deterministic
    /// length.
    pub fn frequencies_exact(&self) -> Vec<Rat> {
        let scale = &self.denom * BigInt::from(self.word_length());
        self.numer.iter().map(|n| Rat::new(n.clone(), scale.clone())).collect()
    }

    /// `E[fr]` as floats, cheap enough to emit per step.
    pub fn frequencies_f64(&self) -> Vec<f64> {
        let scale = &self.denom * BigInt::from(self.word_length());
        self.numer
            .iter()
            .map(|n| Rat::new_raw(n.clone(), scale.clone()).to_f64().unwrap_or(f64::NAN))
            .collect()
    }
}

/// Exact expected k-tuple frequencies of a fixed-length mutation system
/// after `n` steps, as a probability vector.
///
/// Errors when the law is not fixed-length (the product recursion needs the
/// deterministic length), when `|w| < k`, or when `n` exceeds
/// [`DEFAULT_MAX_STEPS`].
pub fn expected_frequency_fixed(
    law: &MutationLaw,
    w: &Word,
    k: usize,
    n: usize,
    max_dim: usize,
) -> Result<Vec<Rat>> {
    if n > DEFAULT_MAX_STEPS {
        return Err(Error::StepCap { n, cap: DEFAULT_MAX_STEPS });
    }
    let mut rec = FixedRecursion::new(law, w, k, max_dim)?;
    for _ in 0..n {
        rec.advance();
    }
    Ok(rec.frequencies_exact())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::DEFAULT_MAX_DIM;
    use crate::oracle::{enumerate_distribution, DEFAULT_OUTCOME_CAP};
    use crate::words::frequency_vector;
    use num_traits::Zero;

    fn r(p: i64, q: i64) -> Rat {
        Rat::new(p.into(), q.into())
    }

    fn running_law() -> MutationLaw {
        MutationLaw::parse(
            "alphabet: 0 1\nrule 0 -> 00 : 2/3\nrule 0 -> 01 : 1/3\nrule 1 -> 11 : 3/4\nrule 1 -> 00 : 1/4\n",
        )
        .unwrap()
    }

    fn identity_law() -> MutationLaw {
        MutationLaw::parse("alphabet: 0 1\nrule 0 -> 0 : 1/1\nrule 1 -> 1 : 1/1\n").unwrap()
    }

    #[test]
    fn one_step_counts_for_00111() {
        // (1/5)(M + 4I)(2,3)^T with M = [[5/3,1/2],[1/3,3/2]].
        let law = running_law();
        let m = build_substitution_matrix(&law, 1, DEFAULT_MAX_DIM).unwrap();
        let got = step_expected_count(&m, &[r(2, 1), r(3, 1)], 5).unwrap();
        assert_eq!(got, vec![r(77, 30), r(103, 30)]);
        let total: Rat = got.into_iter().sum();
        assert_eq!(total, r(6, 1)); // m + tau - 1
    }

    #[test]
    fn one_step_counts_match_oracle_for_pairs() {
        let law = running_law();
        let m = build_substitution_matrix(&law, 2, DEFAULT_MAX_DIM).unwrap();
        let w = law.alphabet().parse_word("01").unwrap();
        let ct = count_vector(&w, 2, 2).to_rationals();
        let got = step_expected_count(&m, &ct, 2).unwrap();
        assert_eq!(got, vec![r(17, 24), r(7, 8), r(7, 8), r(13, 24)]);
        let dist = enumerate_distribution(&law, &w, 1, DEFAULT_OUTCOME_CAP).unwrap();
        assert_eq!(got, dist.expected_count(2, 2));
    }

    #[test]
    fn identity_matrix_makes_step_a_no_op() {
        let law = identity_law();
        let m = build_substitution_matrix(&law, 1, DEFAULT_MAX_DIM).unwrap();
        let ct = vec![r(4, 1), r(3, 1)];
        assert_eq!(step_expected_count(&m, &ct, 7).unwrap(), ct);
    }

    #[test]
    fn step_requires_word_at_least_k() {
        let law = running_law();
        let m = build_substitution_matrix(&law, 2, DEFAULT_MAX_DIM).unwrap();
        let err = step_expected_count(&m, &vec![Rat::zero(); 4], 1).unwrap_err();
        assert!(matches!(err, Error::WordShorterThanK { len: 1, k: 2 }));
    }

    #[test]
    fn zero_steps_is_the_plain_frequency_vector() {
        let law = running_law();
        let w = law.alphabet().parse_word("00111").unwrap();
        for k in 1..=2 {
            let got = expected_frequency_fixed(&law, &w, k, 0, DEFAULT_MAX_DIM).unwrap();
            assert_eq!(got, frequency_vector(&w, k, 2).values());
        }
    }

    #[test]
    fn recursion_matches_oracle_exactly_for_small_n() {
        let law = running_law();
        for word in ["01", "00111"] {
            let w = law.alphabet().parse_word(word).unwrap();
            for k in 1..=2 {
                for n in 0..=3 {
                    let exact =
                        expected_frequency_fixed(&law, &w, k, n, DEFAULT_MAX_DIM).unwrap();
                    let oracle = crate::oracle::oracle_expected_frequency(
                        &law,
                        &w,
                        k,
                        n,
                        DEFAULT_OUTCOME_CAP,
                    )
                    .unwrap();
                    assert_eq!(exact, oracle, "word {word}, k = {k}, n = {n}");
                }
            }
        }
    }

    #[test]
    fn frequencies_form_a_probability_vector() {
        let law = running_law();
        let w = law.alphabet().parse_word("00111").unwrap();
        let mut rec = FixedRecursion::new(&law, &w, 2, DEFAULT_MAX_DIM).unwrap();
        for step in 0..50 {
            let total: Rat = rec.frequencies_exact().into_iter().sum();
            assert!(total.is_one(), "mass lost at step {step}");
            assert_eq!(rec.word_length(), 5 + step);
            rec.advance();
        }
    }

    #[test]
    fn long_run_approaches_the_known_limits() {
        // The gap to the limit decays like n^(-5/6) here (second eigenvalue
        // 13/6 against spectral radius 3), about 1.4e-3 at n = 2000; it
        // drops below 1e-3 near n = 5000, which the acceptance suite pins.
        let law = running_law();
        let w = law.alphabet().parse_word("00111").unwrap();

        let mut rec = FixedRecursion::new(&law, &w, 1, DEFAULT_MAX_DIM).unwrap();
        for _ in 0..2000 {
            rec.advance();
        }
        let fr = rec.frequencies_f64();
        assert!((fr[0] - 0.6).abs() < 2e-3, "fr = {fr:?}");
        assert!((fr[1] - 0.4).abs() < 2e-3);

        let mut rec = FixedRecursion::new(&law, &w, 2, DEFAULT_MAX_DIM).unwrap();
        for _ in 0..2000 {
            rec.advance();
        }
        let fr = rec.frequencies_f64();
        let limit = [24.0 / 55.0, 9.0 / 55.0, 9.0 / 55.0, 13.0 / 55.0];
        for (got, want) in fr.iter().zip(limit) {
            assert!((got - want).abs() < 2e-3, "fr = {fr:?}");
        }
    }

    #[test]
    fn tau_one_laws_stay_well_defined() {
        // An average-1 law that is fixed-length: every replacement has
        // length 1 but the word still churns.
        let law = MutationLaw::parse(
            "alphabet: 0 1\nrule 0 -> 1 : 1/2\nrule 0 -> 0 : 1/2\nrule 1 -> 0 : 1/2\nrule 1 -> 1 : 1/2\n",
        )
        .unwrap();
        let w = law.alphabet().parse_word("01").unwrap();
        let got = expected_frequency_fixed(&law, &w, 1, 10, DEFAULT_MAX_DIM).unwrap();
        assert_eq!(got, vec![r(1, 2), r(1, 2)]);
        let oracle =
            crate::oracle::oracle_expected_frequency(&law, &w, 1, 3, DEFAULT_OUTCOME_CAP)
                .unwrap();
        assert_eq!(oracle, vec![r(1, 2), r(1, 2)]);
    }

    #[test]
    fn non_fixed_laws_are_rejected() {
        let law = MutationLaw::parse(
            "alphabet: 0 1\nrule 0 -> 1 : 1/2\nrule 0 -> 00 : 1/2\nrule 1 -> 0 : 1/2\nrule 1 -> 11 : 1/2\n",
        )
        .unwrap();
        let w = law.alphabet().parse_word("01").unwrap();
        let err = expected_frequency_fixed(&law, &w, 1, 5, DEFAULT_MAX_DIM).unwrap_err();
        assert!(matches!(err, Error::NotFixedLength));
    }

    #[test]
    fn step_cap_is_enforced() {
        let law = running_law();
        let w = law.alphabet().parse_word("01").unwrap();
        let err =
            expected_frequency_fixed(&law, &w, 1, DEFAULT_MAX_STEPS + 1, DEFAULT_MAX_DIM)
                .unwrap_err();
        assert!(matches!(err, Error::StepCap { .. }));
    }
}
