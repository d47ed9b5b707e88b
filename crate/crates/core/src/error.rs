use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime characteristic")]
    NonPrimeCharacteristic(u64),
    #[error("unsupported extension degree {0} (supported: 1..=8)")]
    UnsupportedDegree(u32),
    #[error("field of order {p}^{degree} exceeds the table limit 2^20")]
    FieldTooLarge { p: u32, degree: u32 },
    #[error("no certified terms remain: {0}")]
    PrecisionExhausted(String),
    #[error("variable `{0}` is not bound")]
    UnboundVariable(String),
    #[error("coefficient fields do not match")]
    FieldMismatch,
    #[error("empty slope profile")]
    EmptyProfile,
    #[error("invalid slope profile: {0}")]
    InvalidProfile(String),
    #[error("inconsistent ramification filtration: {0}")]
    InconsistentFiltration(String),
    #[error("unknown divisor `{0}`")]
    UnknownDivisorName(String),
    #[error("tensor product has clashing slopes along {0}")]
    IndeterminateTensor(String),
    #[error("field extension too large: need F_{{{p}^{degree}}} (limit 2^20)")]
    FieldExtensionTooLarge { p: u32, degree: u32 },
    #[error("invalid model parameters: {0}")]
    InvalidModel(String),
    #[error("invalid curve germ: {0}")]
    InvalidCurve(String),
    #[error("invalid approximation request: {0}")]
    InvalidApproxRequest(String),
    #[error("invalid family: {0}")]
    InvalidFamily(String),
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("invalid scenario: {0}")]
    Scenario(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
