//! Mutation laws: per-symbol distributions over nonempty replacement words.
//!
//! A law file is line-oriented text with `#` comments:
//!
//! ```text
//! alphabet: 0 1
//! rule 0 -> 00 : 2/3
//! rule 0 -> 01 : 1/3
//! rule 1 -> 11 : 3/4
//! rule 1 -> 00 : 1/4
//! ```
//!
//! Probabilities are exact rationals and must sum to exactly 1 per symbol;
//! there is no floating tolerance anywhere, which keeps every downstream
//! matrix entry exact. A replacement word is never empty: a symbol cannot be
//! deleted, only replaced. Zero-probability rules are rejected rather than
//! dropped, and duplicate (source, replacement) pairs are rejected rather
//! than merged, to surface authoring mistakes.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::words::{Alphabet, Word};
use crate::{Error, Rat, Result};

/// One replacement option for a source symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub replacement: Word,
    pub probability: Rat,
}

/// A validated mutation law: every symbol has at least one rule, rule
/// probabilities are in (0, 1] and sum to exactly 1 per symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MutationLaw {
    alphabet: Alphabet,
    rules: Vec<Vec<Rule>>,
}

/// How a law's replacement lengths behave.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LawKind {
    /// Every replacement of every symbol has the same integer length.
    FixedLength,
    /// Replacement lengths vary, but every symbol has the same expected
    /// length.
    AverageLength,
    /// Expected replacement lengths differ between symbols.
    General,
}

impl LawKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            LawKind::FixedLength => "fixed-tau",
            LawKind::AverageLength => "average-tau",
            LawKind::General => "general",
        }
    }
}

/// Classification of a law, with the common length `tau` when one exists
/// and the exact per-symbol expected replacement lengths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawClassification {
    pub kind: LawKind,
    pub tau: Option<Rat>,
    pub expected_lengths: Vec<Rat>,
}

impl MutationLaw {
    pub fn new(alphabet: Alphabet, rules: Vec<Vec<Rule>>) -> Result<Self> {
        if rules.len() != alphabet.d() {
            return Err(Error::LawInvalid(format!(
                "expected rules for {} symbols, got {}",
                alphabet.d(),
                rules.len()
            )));
        }
        for (t, symbol_rules) in rules.iter().enumerate() {
            let tok = alphabet.token(t);
            if symbol_rules.is_empty() {
                return Err(Error::LawInvalid(format!("symbol `{tok}` has no rules")));
            }
            let mut sum = Rat::zero();
            for rule in symbol_rules {
                if !rule.probability.is_positive() || rule.probability > Rat::one() {
                    return Err(Error::LawInvalid(format!(
                        "rule probability {} for `{tok}` is outside (0, 1]",
                        rule.probability
                    )));
                }
                sum += &rule.probability;
            }
            if !sum.is_one() {
                return Err(Error::LawInvalid(format!(
                    "probability sum {sum} != 1 for symbol `{tok}`"
                )));
            }
            for (i, a) in symbol_rules.iter().enumerate() {
                if symbol_rules[i + 1..].iter().any(|b| b.replacement == a.replacement) {
                    return Err(Error::LawInvalid(format!(
                        "duplicate replacement for symbol `{tok}`"
                    )));
                }
            }
        }
        Ok(MutationLaw { alphabet, rules })
    }

    /// Parses and validates a law file.
    pub fn parse(text: &str) -> Result<Self> {
        let mut alphabet: Option<Alphabet> = None;
        let mut rules: Vec<Vec<Rule>> = Vec::new();

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some(rest) = content.strip_prefix("alphabet:") {
                if alphabet.is_some() {
                    return Err(Error::LawParse { line, msg: "duplicate alphabet line".into() });
                }
                let tokens: Vec<&str> = rest.split_whitespace().collect();
                let a = Alphabet::new(tokens).map_err(|e| Error::LawParse {
                    line,
                    msg: e.to_string(),
                })?;
                rules = vec![Vec::new(); a.d()];
                alphabet = Some(a);
            } else if let Some(rest) =
                content.strip_prefix("rule").filter(|r| r.starts_with(char::is_whitespace))
            {
                let a = alphabet.as_ref().ok_or_else(|| Error::LawParse {
                    line,
                    msg: "rule before alphabet line".into(),
                })?;
                let (source, replacement, probability) = parse_rule(rest, a).map_err(|e| {
                    let msg = match e {
                        Error::LawInvalid(m) => m,
                        other => other.to_string(),
                    };
                    Error::LawParse { line, msg }
                })?;
                rules[source].push(Rule { replacement, probability });
            } else {
                return Err(Error::LawParse {
                    line,
                    msg: format!("unrecognized directive `{content}`"),
                });
            }
        }

        let alphabet =
            alphabet.ok_or_else(|| Error::LawParse { line: 0, msg: "missing alphabet line".into() })?;
        MutationLaw::new(alphabet, rules)
    }

    /// Canonical text form; `parse(serialize(law))` reproduces the rule
    /// multiset. Rationals are emitted reduced, the alphabet in its given
    /// order.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        out.push_str("alphabet:");
        for tok in self.alphabet.tokens() {
            out.push(' ');
            out.push_str(tok);
        }
        out.push('\n');
        for (t, symbol_rules) in self.rules.iter().enumerate() {
            for rule in symbol_rules {
                out.push_str(&format!(
                    "rule {} -> {} : {}/{}\n",
                    self.alphabet.token(t),
                    self.alphabet.format_word(&rule.replacement),
                    rule.probability.numer(),
                    rule.probability.denom(),
                ));
            }
        }
        out
    }

    /// Stable 64-bit FNV-1a fingerprint of the canonical text form, recorded
    /// as matrix provenance.
    pub fn fingerprint(&self) -> u64 {
        const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
        const PRIME: u64 = 0x0000_0100_0000_01b3;
        let mut h = OFFSET;
        for byte in self.serialize().bytes() {
            h ^= u64::from(byte);
            h = h.wrapping_mul(PRIME);
        }
        h
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn rules_for(&self, symbol: usize) -> &[Rule] {
        &self.rules[symbol]
    }

    pub fn max_replacement_len(&self) -> usize {
        self.rules
            .iter()
            .flat_map(|rs| rs.iter().map(|r| r.replacement.len()))
            .max()
            .unwrap_or(0)
    }

    /// Exact expected replacement length of one symbol.
    pub fn expected_length(&self, symbol: usize) -> Rat {
        self.rules[symbol]
            .iter()
            .map(|r| &r.probability * Rat::from_integer(BigInt::from(r.replacement.len())))
            .sum()
    }

    /// Classifies the law as fixed-length, average-length, or general.
    pub fn classify(&self) -> LawClassification {
        let expected_lengths: Vec<Rat> =
            (0..self.alphabet.d()).map(|t| self.expected_length(t)).collect();

        let mut lengths = self.rules.iter().flat_map(|rs| rs.iter().map(|r| r.replacement.len()));
        let first = lengths.next().expect("laws have at least one rule");
        if lengths.all(|l| l == first) {
            return LawClassification {
                kind: LawKind::FixedLength,
                tau: Some(Rat::from_integer(BigInt::from(first))),
                expected_lengths,
            };
        }

        let tau = expected_lengths[0].clone();
        if expected_lengths.iter().all(|e| *e == tau) {
            LawClassification { kind: LawKind::AverageLength, tau: Some(tau), expected_lengths }
        } else {
            LawClassification { kind: LawKind::General, tau: None, expected_lengths }
        }
    }
}

fn parse_rule(rest: &str, alphabet: &Alphabet) -> Result<(usize, Word, Rat)> {
    let (lhs, prob_text) = rest
        .rsplit_once(':')
        .ok_or_else(|| Error::LawInvalid("expected `rule <tok> -> <word> : <p>/<q>`".into()))?;
    let (source_text, word_text) = lhs
        .split_once("->")
        .ok_or_else(|| Error::LawInvalid("expected `->` between source and replacement".into()))?;

    let source = alphabet.index_of(source_text.trim())?;
    let word_text = word_text.trim();
    if word_text.is_empty() {
        return Err(Error::LawInvalid("empty replacement".into()));
    }
    let replacement = alphabet.parse_word(word_text)?;
    let probability = parse_rational(prob_text.trim())?;
    if !probability.is_positive() {
        return Err(Error::LawInvalid(format!("probability {probability} is not positive")));
    }
    Ok((source, replacement, probability))
}

/// Parses `p/q` (or a bare integer) into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rat> {
    let bad = || Error::LawInvalid(format!("malformed rational `{text}`"));
    let (p, q) = match text.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (text, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q <= BigInt::zero() {
        return Err(bad());
    }
    Ok(Rat::new(p, q))
}
