use thiserror::Error;

/// Errors raised by the library; each variant maps to one contract violation.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("alphabet size must be at least 2 (got {0})")]
    AlphabetTooSmall(u32),
    #[error("duplication window k must be at least 2 (got {0})")]
    WindowTooSmall(usize),
    #[error("string length {len} is below the duplication window k={k}")]
    StringTooShort { len: usize, k: usize },
    #[error("symbol {sym} is outside Z_{q}")]
    SymbolOutOfRange { sym: u32, q: u32 },
    #[error("duplication index {index} out of range for length {len} with k={k}")]
    IndexOutOfRange { index: usize, len: usize, k: usize },
    #[error("strings have mismatched parameters (q or k)")]
    ParameterMismatch,
    #[error("string is not a descendant of the given root")]
    NotInCone,
    #[error("root string is not irreducible")]
    RootNotIrreducible,
    #[error("vectors have different dimensions ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error("vectors have different 1-norms ({0} vs {1})")]
    NormMismatch(u64, u64),
    #[error("strings lie in different descendant cones")]
    DifferentCones,
    #[error("strings have different lengths")]
    LengthMismatch,
    #[error("1-norm of u ({norm}) is below the requested level {level}")]
    NormBelowLevel { norm: u64, level: u64 },
    #[error("norm {norm} exceeds the decodable range {max}")]
    NormAboveRange { norm: u64, max: u64 },
    #[error("m={m} is out of range for the simplex of size {size}")]
    MOutOfRange { m: u64, size: String },
    #[error("no m-subset at pairwise distance d exists (m={m}, d={d})")]
    NoFeasibleSubset { m: u64, d: u64 },
    #[error("instance too large: {0}")]
    InstanceTooLarge(String),
    #[error("oracle budget exceeded ({0})")]
    BudgetExceeded(String),
    #[error("empty typicality window for n={n}")]
    EmptyWindow { n: u64 },
    #[error("parameter regime violated: {0}")]
    RegimeViolation(String),
    #[error("inconsistent reads: not all reads share a duplication root")]
    InconsistentReads,
    #[error("no common ancestor at the requested length")]
    NoCommonAncestor,
    #[error("codebook mismatch: reads do not belong to the codebook's cone")]
    CodebookMismatch,
    #[error(
        "read sampling exhausted after {attempts} attempts ({requested} distinct reads requested)"
    )]
    SamplingExhausted { attempts: u64, requested: u64 },
    #[error("invalid read set: {0}")]
    BadReadSet(String),
    #[error("invalid codebook: {0}")]
    BadCodebook(String),
    #[error("{0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
