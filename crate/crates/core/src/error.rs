use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CrispError {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("invalid budget: {0}")]
    InvalidBudget(String),
    #[error("syntax error at {line}:{col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("undefined name `{0}`")]
    UndefinedName(String),
    #[error("`{0}` is already defined")]
    Redefinition(String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("base mismatch: {0}")]
    BaseMismatch(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("ill-defined map: {0}")]
    IllDefined(String),
    #[error("target is not module-finite over the base: {0}")]
    NotFiniteOverBase(String),
    #[error("algebra is not finite-dimensional over its field: {0}")]
    NotFiniteDimensional(String),
    #[error("not a complex at index {0}")]
    NotAComplexAt(i64),
    #[error("not a retraction: {0}")]
    NotARetraction(String),
    #[error("hint rejected: {0}")]
    HintRejected(String),
    #[error("rule side condition failed: {0}")]
    RuleSideConditionFailed(String),
    #[error("certificate invalid: {0}")]
    CertificateInvalid(String),
    #[error("unsupported residue field: {0}")]
    UnsupportedResidueField(String),
    #[error("spectrum not enumerated: {0}")]
    SpectraNotEnumerated(String),
    #[error("search space too large: {0}")]
    SearchTooLarge(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, CrispError>;
