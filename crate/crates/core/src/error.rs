use thiserror::Error;

/// Errors raised by the library.
///
/// Variants fall in two families: *domain* errors (an argument lies outside the
/// region where an operation is defined) and *structural* errors (shapes or
/// dimensions that do not fit together). The CLI maps both to exit code 2.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension {0} is not an odd prime")]
    NotOddPrime(u32),
    #[error("number of subsystems must be at least 1")]
    NoSubsystems,
    #[error("Hilbert-space dimension {dim} exceeds the configured maximum {max}")]
    TooLarge { dim: usize, max: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("not normalized: total is {0}, expected 1")]
    NotNormalized(f64),
    #[error("Wigner value has imaginary part {0:e}")]
    ComplexWignerValue(f64),
    #[error("not the Choi state of a CPTP map: {0}")]
    NotCptp(String),
    #[error("reference entry {0} is not strictly positive")]
    NonPositiveReference(usize),
    #[error("value {value} exceeds the bound {bound} at index {index}")]
    OutOfRange { index: usize, value: f64, bound: f64 },
    #[error("parameter out of domain: {0}")]
    Domain(String),
    #[error("parity violation: {0}")]
    Parity(String),
    #[error("Rényi order {0} is not of the admissible form 2a/(2b-1) with a >= b >= 1")]
    InadmissibleOrder(String),
    #[error("Gibbs state is not in the interior of the free set: {0}")]
    NotInterior(String),
    #[error("undefined bound: {0}")]
    Undefined(String),
    #[error("cannot parse {what}: {input}")]
    Parse { what: &'static str, input: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
