//! The exact-rational k-substitution matrix of a mutation law.
//!
//! `M` is `d^k × d^k`, indexed by lexicographic tuple rank with columns as
//! source tuples and rows as targets. Column `v` accumulates, over every
//! rule `(symbol, replacement η, probability)` of the law, the expected
//! k-windows created when a symbol inside an occurrence of `v` mutates:
//!
//! * an interior position `j ∈ {1, …, k-1}` holding the rule's symbol
//!   contributes the window made of the first `k` symbols of
//!   `v[..j] · η · v[j+1..]`;
//! * the leading position contributes, for every offset `j ∈ [|η|]`, the
//!   first `k` symbols of `η[j..] · v[1..]`.
//!
//! Windows that would run past the available symbols never occur: the
//! concatenations above always hold at least `k` symbols. For a law whose
//! expected replacement length is a constant `τ`, every column sums to
//! exactly `τ + k - 1`, which is also the spectral radius.
//!
//! One mutation step maps expected counts by `(M + (m-k)I)/m`; see
//! [`crate::expectation`].

use crate::law::MutationLaw;
use crate::words::{lex_rank, lex_tuple, tuple_count, Alphabet};
use crate::{Error, Rat, RatMat, Result};

/// Default cap on the matrix dimension `d^k`.
pub const DEFAULT_MAX_DIM: usize = 4096;

/// A k-substitution matrix together with its provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubMatrix {
    k: usize,
    alphabet: Alphabet,
    law_fingerprint: u64,
    mat: RatMat,
}

impl SubMatrix {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Fingerprint of the law the matrix was built from.
    pub fn law_fingerprint(&self) -> u64 {
        self.law_fingerprint
    }

    pub fn dimension(&self) -> usize {
        self.mat.rows()
    }

    /// Entry at (target tuple rank, source tuple rank).
    pub fn entry(&self, u: usize, v: usize) -> &Rat {
        self.mat.at(u, v)
    }

    pub fn mat(&self) -> &RatMat {
        &self.mat
    }

    /// Exact per-column sums; `τ + k - 1` in every column for laws with a
    /// constant expected replacement length.
    pub fn column_sums(&self) -> Vec<Rat> {
        self.mat.column_sums()
    }

    /// Dense text form: `k`, `alphabet`, `dimension`, then an `entries`
    /// block of row-major reduced rationals.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("k = {}\n", self.k));
        out.push_str(&format!("alphabet = {}\n", self.alphabet.tokens().join(" ")));
        out.push_str(&format!("dimension = {}\n", self.dimension()));
        out.push_str("entries =\n");
        for i in 0..self.mat.rows() {
            let row: Vec<String> =
                self.mat.row(i).iter().map(|e| format!("{}/{}", e.numer(), e.denom())).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Builds the k-substitution matrix of `law`, exactly.
///
/// Errors with [`Error::DimensionCap`] when `d^k` exceeds `max_dim`.
pub fn build_substitution_matrix(
    law: &MutationLaw,
    k: usize,
    max_dim: usize,
) -> Result<SubMatrix> {
    assert!(k >= 1, "k must be at least 1");
    let d = law.alphabet().d();
    let dim = tuple_count(d, k).ok_or(Error::DimensionCap { dim: usize::MAX, cap: max_dim })?;
    if dim > max_dim {
        return Err(Error::DimensionCap { dim, cap: max_dim });
    }

    let mut mat = RatMat::zeros(dim, dim);
    let mut window = Vec::with_capacity(k);
    for col in 0..dim {
        let v = lex_tuple(col, d, k);

        // Mutation at an interior position of the window.
        for j in 1..k {
            for rule in law.rules_for(v[j]) {
                window.clear();
                window.extend(
                    v[..j]
                        .iter()
                        .chain(rule.replacement.symbols())
                        .chain(&v[j + 1..])
                        .take(k),
                );
                let u = lex_rank(&window, d);
                *mat.at_mut(u, col) += &rule.probability;
            }
        }

        // Mutation at the leading position: one window per replacement
        // offset.
        for rule in law.rules_for(v[0]) {
            let eta = rule.replacement.symbols();
            for j in 0..eta.len() {
                window.clear();
                window.extend(eta[j..].iter().chain(&v[1..]).take(k));
                let u = lex_rank(&window, d);
                *mat.at_mut(u, col) += &rule.probability;
            }
        }
    }

    Ok(SubMatrix { k, alphabet: law.alphabet().clone(), law_fingerprint: law.fingerprint(), mat })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{enumerate_distribution, DEFAULT_OUTCOME_CAP};
    use num_traits::{One, Zero};

    fn r(p: i64, q: i64) -> Rat {
        Rat::new(p.into(), q.into())
    }

    fn running_law() -> MutationLaw {
        MutationLaw::parse(
            "alphabet: 0 1\nrule 0 -> 00 : 2/3\nrule 0 -> 01 : 1/3\nrule 1 -> 11 : 3/4\nrule 1 -> 00 : 1/4\n",
        )
        .unwrap()
    }

    fn power_law(a: usize) -> MutationLaw {
        let zeros = "0".repeat(a);
        let ones = "1".repeat(a);
        MutationLaw::parse(&format!(
            "alphabet: 0 1\nrule 0 -> {zeros} : 1/1\nrule 1 -> {ones} : 1/1\n"
        ))
        .unwrap()
    }

    fn mat_from(rows: Vec<Vec<Rat>>) -> RatMat {
        RatMat::from_rows(rows)
    }

    #[test]
    fn running_law_symbol_matrix() {
        let m = build_substitution_matrix(&running_law(), 1, DEFAULT_MAX_DIM).unwrap();
        let expected =
            mat_from(vec![vec![r(5, 3), r(1, 2)], vec![r(1, 3), r(3, 2)]]);
        assert_eq!(m.mat(), &expected);
        assert_eq!(m.column_sums(), vec![r(2, 1), r(2, 1)]);
    }

    #[test]
    fn running_law_pair_matrix() {
        let m = build_substitution_matrix(&running_law(), 2, DEFAULT_MAX_DIM).unwrap();
        let expected = mat_from(vec![
            vec![r(28, 12), r(11, 12), r(6, 12), r(3, 12)],
            vec![r(4, 12), r(21, 12), r(0, 12), r(3, 12)],
            vec![r(4, 12), r(0, 12), r(21, 12), r(3, 12)],
            vec![r(0, 12), r(4, 12), r(9, 12), r(27, 12)],
        ]);
        assert_eq!(m.mat(), &expected);
        assert!(m.column_sums().iter().all(|s| *s == r(3, 1)));
    }

    #[test]
    fn power_law_pair_matrix() {
        for a in [2i64, 3] {
            let m = build_substitution_matrix(&power_law(a as usize), 2, DEFAULT_MAX_DIM).unwrap();
            let expected = mat_from(vec![
                vec![r(a + 1, 1), r(a - 1, 1), r(0, 1), r(0, 1)],
                vec![r(0, 1), r(2, 1), r(0, 1), r(0, 1)],
                vec![r(0, 1), r(0, 1), r(2, 1), r(0, 1)],
                vec![r(0, 1), r(0, 1), r(a - 1, 1), r(a + 1, 1)],
            ]);
            assert_eq!(m.mat(), &expected, "a = {a}");
        }
    }

    #[test]
    fn identity_law_gives_k_times_identity() {
        let law = MutationLaw::parse("alphabet: 0 1\nrule 0 -> 0 : 1/1\nrule 1 -> 1 : 1/1\n")
            .unwrap();
        for k in 1..=3 {
            let m = build_substitution_matrix(&law, k, DEFAULT_MAX_DIM).unwrap();
            let dim = m.dimension();
            for u in 0..dim {
                for v in 0..dim {
                    let want = if u == v { r(k as i64, 1) } else { Rat::zero() };
                    assert_eq!(*m.entry(u, v), want);
                }
            }
        }
    }

    #[test]
    fn general_formula_matches_symbol_definition_at_k_1() {
        // At k = 1 the entry (u, v) must equal the expected number of u's in
        // a replacement of v, summed directly over the rules.
        for law in [running_law(), power_law(3)] {
            let d = law.alphabet().d();
            let m = build_substitution_matrix(&law, 1, DEFAULT_MAX_DIM).unwrap();
            for u in 0..d {
                for v in 0..d {
                    let direct: Rat = law
                        .rules_for(v)
                        .iter()
                        .map(|rule| {
                            let count =
                                rule.replacement.symbols().iter().filter(|&&s| s == u).count();
                            &rule.probability * Rat::from_integer((count as i64).into())
                        })
                        .sum();
                    assert_eq!(*m.entry(u, v), direct);
                }
            }
        }
    }

    #[test]
    fn one_step_identity_matches_oracle_on_pairs() {
        // (1/m)(M + (m-k)I) ct must reproduce the oracle's one-step expected
        // counts; this pins the truncation semantics of the window sums.
        let law = running_law();
        let m = build_substitution_matrix(&law, 2, DEFAULT_MAX_DIM).unwrap();
        let w = law.alphabet().parse_word("01").unwrap();
        let ct = crate::words::count_vector(&w, 2, 2).to_rationals();
        let len = r(w.len() as i64, 1);
        let stepped: Vec<Rat> = m
            .mat()
            .matvec(&ct)
            .into_iter()
            .zip(&ct)
            .map(|(mv, c)| (mv + (len.clone() - r(2, 1)) * c) / len.clone())
            .collect();
        let dist = enumerate_distribution(&law, &w, 1, DEFAULT_OUTCOME_CAP).unwrap();
        assert_eq!(stepped, dist.expected_count(2, 2));
    }

    #[test]
    fn dimension_cap_is_enforced() {
        let law = running_law();
        let err = build_substitution_matrix(&law, 3, 4).unwrap_err();
        assert!(matches!(err, Error::DimensionCap { dim: 8, cap: 4 }));
    }

    #[test]
    fn serialization_is_dense_and_reduced() {
        let m = build_substitution_matrix(&running_law(), 1, DEFAULT_MAX_DIM).unwrap();
        let text = m.serialize();
        assert!(text.starts_with("k = 1\nalphabet = 0 1\ndimension = 2\nentries =\n"));
        assert!(text.contains("5/3 1/2"));
        assert!(text.contains("1/3 3/2"));
        assert!(m.column_sums().iter().all(|s| s == &(Rat::one() + Rat::one())));
    }
}
