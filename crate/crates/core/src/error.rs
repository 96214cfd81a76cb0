use thiserror::Error;

/// Errors raised by field construction, polynomial algebra and the certifiers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("characteristic {0} is too large (must be below 2^32)")]
    CharacteristicTooLarge(u64),
    #[error("modulus must be monic of degree {expected}")]
    BadModulus { expected: u32 },
    #[error("modulus is reducible over F_{0}")]
    ReducibleModulus(u64),
    #[error("field of order {p}^{degree} exceeds the configured cap of 2^{max_bits}")]
    FieldTooLarge { p: u64, degree: u32, max_bits: u32 },
    #[error("{q} is not a power of the characteristic {p}")]
    NotAPowerOfCharacteristic { q: u64, p: u64 },
    #[error("degree {sub} does not divide {sup}")]
    DegreeNotDivisible { sub: u32, sup: u32 },
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("the zero polynomial is not allowed here")]
    ZeroPolynomial,
    #[error("enumeration of {count} items exceeds the cap {cap}")]
    EnumerationTooLarge { count: u128, cap: u64 },
    #[error("degree {degree} exceeds the cap {cap}")]
    DegreeTooLarge { degree: u64, cap: u64 },
    #[error("the subspace lies inside the hypersurface (section is not proper)")]
    NotProper,
    #[error("the hypersurface is not smooth")]
    NotSmooth,
    #[error("the hypersurface is not reduced")]
    NotReduced,
    #[error("rows span the zero subspace")]
    ZeroSpan,
    #[error("inhomogeneous polynomial: term degrees {first} and {other}")]
    Inhomogeneous { first: u32, other: u32 },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("coefficient `{0}` is not an element of the field")]
    CoefficientOutsideField(String),
    #[error("no embedding found: {0}")]
    Embedding(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
