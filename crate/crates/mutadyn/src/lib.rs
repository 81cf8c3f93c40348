//! Probabilistic symbol-rewrite (mutation) systems over finite alphabets.
//!
//! A mutation law assigns to each symbol a finitely supported probability
//! distribution over nonempty replacement words. A mutation step picks a
//! uniformly random position in a word and replaces the symbol there by a
//! word drawn from its distribution. This crate models such systems and
//! answers, exactly where possible, how the frequencies of length-k windows
//! (counted cyclically) evolve:
//!
//! * [`words`] — alphabets, words, lexicographic tuple ranking, and cyclic
//!   count/frequency vectors;
//! * [`law`] — parsing, validation, and classification of mutation laws
//!   (fixed replacement length, fixed average length, or general);
//! * [`matrix`] — the exact-rational k-substitution matrix whose column `v`
//!   holds the expected change in k-tuple counts when a symbol inside an
//!   occurrence of `v` mutates;
//! * [`expectation`] — exact expected counts/frequencies after one step (any
//!   law) or after `n` steps (fixed-length laws, product recursion);
//! * [`spectral`] — block-triangular structure of constant-column-sum
//!   nonnegative matrices, exact maximal-eigenvalue eigenvectors, the
//!   limiting expected frequency, and convergence-condition checks;
//! * [`simulate`] — seeded Monte Carlo evolution and empirical statistics;
//! * [`oracle`] — brute-force enumeration of the full outcome distribution
//!   for small instances, the ground truth every exact formula is tested
//!   against;
//! * [`lawgen`] — seeded random law generators used by the validation suite.
//!
//! All core arithmetic is exact: probabilities, matrix entries, and expected
//! values are arbitrary-precision rationals. Floating point appears only in
//! the numerical spectrum scan of [`spectral`] and in Monte Carlo summaries.

pub mod expectation;
pub mod law;
pub mod lawgen;
pub mod linalg;
pub mod matrix;
pub mod oracle;
pub mod simulate;
pub mod spectral;
pub mod words;

/// Exact rational scalar used throughout the crate.
pub type Rat = num_rational::BigRational;

/// Dense matrix over exact rationals.
pub type RatMat = linalg::Mat<Rat>;

/// Dense matrix over `f64`, used by the numerical spectrum scan.
pub type F64Mat = linalg::Mat<f64>;

/// Errors produced by parsing, validation, and the numeric kernels.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("symbol `{0}` not in alphabet")]
    UnknownSymbol(String),
    #[error("invalid word: {0}")]
    InvalidWord(String),
    #[error("law error at line {line}: {msg}")]
    LawParse { line: usize, msg: String },
    #[error("law error: {0}")]
    LawInvalid(String),
    #[error("matrix dimension {dim} exceeds cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("outcome enumeration exceeds cap {cap}")]
    OutcomeCap { cap: usize },
    #[error("step count {n} exceeds cap {cap}")]
    StepCap { n: usize, cap: usize },
    #[error("word length {len} is shorter than k = {k}")]
    WordShorterThanK { len: usize, k: usize },
    #[error("law is not a fixed-length mutation law; the product recursion requires one")]
    NotFixedLength,
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix has a negative entry at ({row}, {col})")]
    NegativeEntry { row: usize, col: usize },
    #[error("column sums are not all equal (column {col} differs)")]
    ColumnSumsUnequal { col: usize },
    #[error("count vector is zero; need a word of positive length")]
    ZeroMass,
    #[error("internal spectral invariant violated: {0}")]
    SpectralInternal(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for resource-cap errors (CLI exit code 2); everything else is a
    /// validation error (exit code 1).
    pub fn is_resource_cap(&self) -> bool {
        matches!(
            self,
            Error::DimensionCap { .. } | Error::OutcomeCap { .. } | Error::StepCap { .. }
        )
    }
}
