use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
    #[error("need at least two classes, found one")]
    SingleClass,
    #[error("labels must be binary (0/1), found {0}")]
    NonBinaryLabels(usize),
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("dimension mismatch: model expects {expected} features, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("model is not trained: {0}")]
    Untrained(&'static str),
    #[error("schema mismatch: pipeline was trained on schema {expected:016x}, input has {actual:016x}")]
    SchemaMismatch { expected: u64, actual: u64 },
    #[error("all features were dropped by selection")]
    AllFeaturesDropped,
    #[error("malformed data: {0}")]
    Malformed(String),
}
