//! Alphabets, words, lexicographic k-tuple ranking, and cyclic counting.
//!
//! Symbols are stored as indices into an [`Alphabet`], so every numeric
//! kernel works on integers; the alphabet owns the token↔index mapping.
//! k-tuples of a word are counted cyclically: the window starting at
//! position `i` wraps around, and a word of length `m` has exactly `m`
//! windows. When `k` exceeds the word length the count vector is zero,
//! matching the frequency convention for over-long tuples.

use std::collections::HashMap;

use num_traits::Zero;

use crate::{Error, Rat, Result};

/// Ordered set of distinct symbol tokens; the order fixes the lexicographic
/// ranking of tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    tokens: Vec<String>,
    lookup: HashMap<String, usize>,
    single_char: bool,
}

impl Alphabet {
    pub fn new<S: Into<String>>(tokens: Vec<S>) -> Result<Self> {
        let tokens: Vec<String> = tokens.into_iter().map(Into::into).collect();
        if tokens.is_empty() {
            return Err(Error::InvalidAlphabet("alphabet must have at least one symbol".into()));
        }
        let mut lookup = HashMap::new();
        for (i, tok) in tokens.iter().enumerate() {
            if tok.is_empty() {
                return Err(Error::InvalidAlphabet("empty token".into()));
            }
            if tok.chars().any(|c| c.is_whitespace() || c == ',' || c == '#' || c == ':') {
                return Err(Error::InvalidAlphabet(format!(
                    "token `{tok}` contains a reserved character"
                )));
            }
            if lookup.insert(tok.clone(), i).is_some() {
                return Err(Error::InvalidAlphabet(format!("duplicate token `{tok}`")));
            }
        }
        let single_char = tokens.iter().all(|t| t.chars().count() == 1);
        Ok(Alphabet { tokens, lookup, single_char })
    }

    /// Alphabet size `d`.
    pub fn d(&self) -> usize {
        self.tokens.len()
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn token(&self, i: usize) -> &str {
        &self.tokens[i]
    }

    pub fn index_of(&self, token: &str) -> Result<usize> {
        self.lookup.get(token).copied().ok_or_else(|| Error::UnknownSymbol(token.into()))
    }

    /// True when every token is a single character, in which case words
    /// serialize as plain concatenations.
    pub fn single_char(&self) -> bool {
        self.single_char
    }

    /// Parses a word: comma-separated tokens, or a plain concatenation when
    /// all tokens are single characters.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let indices = if text.contains(',') {
            text.split(',')
                .map(|t| self.index_of(t.trim()))
                .collect::<Result<Vec<_>>>()?
        } else if self.single_char {
            text.chars()
                .map(|c| self.index_of(&c.to_string()))
                .collect::<Result<Vec<_>>>()?
        } else {
            // Multi-character tokens without commas: only a single symbol fits.
            vec![self.index_of(text.trim())?]
        };
        Word::from_indices(indices, self.d())
    }

    pub fn format_word(&self, word: &Word) -> String {
        self.format_symbols(word.symbols())
    }

    pub fn format_symbols(&self, symbols: &[usize]) -> String {
        if self.single_char {
            symbols.iter().map(|&i| self.tokens[i].as_str()).collect()
        } else {
            symbols.iter().map(|&i| self.tokens[i].as_str()).collect::<Vec<_>>().join(",")
        }
    }

    /// Lexicographic rank of a k-tuple of tokens.
    pub fn rank_of_tokens(&self, tokens: &[&str]) -> Result<usize> {
        let tuple = tokens.iter().map(|t| self.index_of(t)).collect::<Result<Vec<_>>>()?;
        Ok(lex_rank(&tuple, self.d()))
    }
}

/// `d^k` with overflow detection; `None` when the tuple space does not fit
/// in `usize`.
pub fn tuple_count(d: usize, k: usize) -> Option<usize> {
    let mut n: usize = 1;
    for _ in 0..k {
        n = n.checked_mul(d)?;
    }
    Some(n)
}

/// Lexicographic rank of a tuple of symbol indices:
/// `rank(i_0 … i_{k-1}) = Σ i_j · d^{k-1-j}`.
pub fn lex_rank(tuple: &[usize], d: usize) -> usize {
    debug_assert!(tuple.iter().all(|&i| i < d));
    tuple.iter().fold(0, |acc, &i| acc * d + i)
}

/// Inverse of [`lex_rank`]: the `rank`-th tuple of length `k` over `d`
/// symbols.
pub fn lex_tuple(rank: usize, d: usize, k: usize) -> Vec<usize> {
    let mut tuple = vec![0; k];
    let mut r = rank;
    for j in (0..k).rev() {
        tuple[j] = r % d;
        r /= d;
    }
    debug_assert_eq!(r, 0, "rank out of range");
    tuple
}

/// Nonempty sequence of symbol indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn from_indices(indices: Vec<usize>, d: usize) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidWord("word must be nonempty".into()));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= d) {
            return Err(Error::InvalidWord(format!("symbol index {bad} out of range (d = {d})")));
        }
        Ok(Word(indices))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn symbols(&self) -> &[usize] {
        &self.0
    }

    pub fn symbol(&self, i: usize) -> usize {
        self.0[i]
    }

    /// Replaces the symbol at `i` by `replacement` in place.
    pub fn splice(&mut self, i: usize, replacement: &[usize]) {
        debug_assert!(!replacement.is_empty(), "a symbol is replaced, never deleted");
        self.0.splice(i..=i, replacement.iter().copied());
    }

    /// Copy of the word with the symbol at `i` replaced by `replacement`.
    pub fn spliced(&self, i: usize, replacement: &[usize]) -> Word {
        let mut out = Vec::with_capacity(self.0.len() + replacement.len() - 1);
        out.extend_from_slice(&self.0[..i]);
        out.extend_from_slice(replacement);
        out.extend_from_slice(&self.0[i + 1..]);
        Word(out)
    }
}

/// Cyclic k-tuple occurrence counts of a word, indexed by lexicographic
/// rank. Entries sum to `|w|` when `k ≤ |w|`; all zero when `k > |w|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountVector {
    k: usize,
    counts: Vec<u64>,
}

impl CountVector {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn sum(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn to_rationals(&self) -> Vec<Rat> {
        self.counts.iter().map(|&c| Rat::from_integer(c.into())).collect()
    }
}

/// Counts every cyclic k-window of `w`. `k ≥ 1`; the tuple space `d^k` must
/// fit in memory, which callers bound via the matrix dimension cap.
pub fn count_vector(w: &Word, k: usize, d: usize) -> CountVector {
    assert!(k >= 1, "k must be at least 1");
    let dim = tuple_count(d, k).expect("tuple space overflows usize");
    let mut counts = vec![0u64; dim];
    let m = w.len();
    if k <= m {
        for i in 0..m {
            let mut rank = 0;
            for j in 0..k {
                rank = rank * d + w.symbol((i + j) % m);
            }
            counts[rank] += 1;
        }
    }
    CountVector { k, counts }
}

/// Exact k-tuple frequencies of a word: entries of the count vector divided
/// by `|w|`, or the zero vector when `k > |w|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyVector {
    k: usize,
    values: Vec<Rat>,
}

impl FrequencyVector {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Rat> {
        self.values
    }
}

pub fn frequency_vector(w: &Word, k: usize, d: usize) -> FrequencyVector {
    let ct = count_vector(w, k, d);
    let m = w.len() as i64;
    let values = if k <= w.len() {
        let len = Rat::from_integer(m.into());
        ct.counts.iter().map(|&c| Rat::from_integer(c.into()) / len.clone()).collect()
    } else {
        vec![Rat::zero(); ct.counts.len()]
    };
    FrequencyVector { k, values }
}
