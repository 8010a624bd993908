use thiserror::Error;

/// Every failure the library can report. The `Display` text starts with a
/// stable kebab-case code so callers and tests can match on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field-mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("not-prime: {0}")]
    NotPrime(u64),
    #[error("constant-has-no-initial")]
    ConstantHasNoInitial,
    #[error("divisor-free-of-variable: {0}")]
    DivisorFreeOfVariable(String),
    #[error("unbound-variable: {0}")]
    UnboundVariable(String),
    #[error("bad-prime: denominator divisible by {0}")]
    BadPrime(u32),
    #[error("division-by-zero")]
    DivisionByZero,
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown-variable: {name} at line {line}, column {column}")]
    UnknownVariable {
        name: String,
        line: usize,
        column: usize,
    },
    #[error("duplicate-variable: {0}")]
    DuplicateVariable(String),
    #[error("not-a-permutation: {0}")]
    NotAPermutation(String),
    #[error("too-large-for-exact: {0} vertices (limit 10)")]
    TooLargeForExact(usize),
    #[error("degenerate-graph: {0} vertices")]
    DegenerateGraph(usize),
    #[error("nothing-to-reduce: stratum {0} is empty")]
    NothingToReduce(usize),
    #[error("invalid-reduction-map: {0}")]
    InvalidReductionMap(String),
    #[error("rank-undefined: {0}")]
    RankUndefined(String),
    #[error("precondition: {0}")]
    Precondition(String),
    #[error("search-space-too-large: {p}^{n} exceeds 10^6")]
    SearchSpaceTooLarge { p: u32, n: usize },
    #[error("bad-document: {0}")]
    BadDocument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
