use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NonPrime(u32),

    #[error("field of order {p}^(2*{e}) exceeds the supported maximum of 6561 elements")]
    TooLargeField { p: u32, e: u32 },

    #[error("no modulus shipped for p = {p}, e = {e}")]
    NoModulusAvailable { p: u32, e: u32 },

    #[error("shipped modulus for p = {p}, e = {e} is reducible")]
    ReducibleModulus { p: u32, e: u32 },

    #[error("{0} is not a prime power")]
    NotPrimePower(u32),

    #[error("division by zero")]
    DivisionByZero,

    #[error("element index {index} out of range for a field of order {order}")]
    ElementOutOfRange { index: u32, order: u32 },

    #[error("index {index} out of range [0, {total})")]
    IndexOutOfRange { index: u64, total: u64 },

    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("matrix is not Hermitian")]
    NotHermitian,

    #[error("matrix entry is not in the base field F_q")]
    NotInSubfield,

    #[error("vector is zero")]
    ZeroVector,

    #[error("vectors are linearly dependent")]
    DependentVectors,

    #[error("ell = {0} is not supported (expected 1..=4)")]
    UnsupportedEll(usize),

    #[error("invalid minor index: {0}")]
    InvalidMinor(String),

    #[error("space of {size} points exceeds the limit of {limit}")]
    TooLarge { size: u128, limit: u128 },

    #[error("{size} matrices exceed the brute-force limit of {limit}")]
    TooLargeForBruteForce { size: u128, limit: u128 },

    #[error("work of {needed} exceeds the configured budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("generator matrix has rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },

    #[error("vector is not a codeword")]
    NotInCode,

    #[error("no dependent set of at most {0} columns exists")]
    NoneFoundWithinBound(usize),

    #[error("alpha must lie in F_q \\ {{0, 1}}")]
    InvalidAlpha,

    #[error("combination is not self-conjugate")]
    NotSelfConjugate,

    #[error("minor {0} is not a maximal minor of the combination")]
    MinorNotMaximal(String),

    #[error("no lambda in F_(q^2)* reduces the spread")]
    NoValidLambda,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("malformed file: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
