use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors reported by validation and by operations whose preconditions can
/// fail on well-formed input. Violations of internal arithmetic invariants
/// (e.g. an inexact division inside fraction-free elimination) panic instead,
/// since they indicate a bug rather than bad data.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("Laurent rings over Laurent rings are not supported")]
    NestedLaurent,

    #[error("{0} requires a field coefficient ring, got {1}")]
    NotAField(String, String),

    #[error("{0} is not supported over {1}")]
    UnsupportedRing(String, String),

    #[error("matrix must be square for {0}: got {1}x{2}")]
    NotSquare(String, usize, usize),

    #[error("the zero element has no pivot term")]
    ZeroPivot,

    #[error("pivot coefficient {coeff} at exponent {exp} is not a unit of the base ring")]
    NonUnitPivot { exp: i64, coeff: String },

    #[error("series direction mismatch")]
    DirMismatch,

    #[error("determined window is empty: {0}")]
    EmptyWindow(String),

    #[error("complex invariant violated at degree {degree}: {kind}")]
    ComplexViolation { degree: i64, kind: String },

    #[error("chain map invalid at degree {degree}: {kind}")]
    ChainMapViolation { degree: i64, kind: String },

    #[error("double complex law {law} fails at position ({p},{q})")]
    LawViolation { law: String, p: i64, q: i64 },

    #[error("not a totalisation cocycle at column {p}: {kind}")]
    NotACocycle { p: i64, kind: String },

    #[error("columns are not exact at interior position ({p},{q})")]
    ColumnsNotExact { p: i64, q: i64 },

    #[error("rows are not exact at interior position ({p},{q})")]
    RowsNotExact { p: i64, q: i64 },

    #[error("residual at column {p} has no preimage: {kind}")]
    NoPreimage { p: i64, kind: String },

    #[error("witness fails to reproduce the cocycle at column {p}")]
    WitnessMismatch { p: i64 },

    #[error("not an endomorphism: {0}")]
    NotAnEndomorphism(String),

    #[error("torus identification fails at position ({p},{q}) in {part}")]
    TorusMismatch { p: i64, q: i64, part: String },

    #[error("no canonical coefficient map from {0} to {1}")]
    NoCanonicalMap(String, String),

    #[error("generation is infeasible: {0}")]
    Infeasible(String),

    #[error("parse error: {0}")]
    Parse(String),
}
