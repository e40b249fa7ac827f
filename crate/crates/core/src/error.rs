use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("range error: {0}")]
    Range(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("set is empty")]
    EmptySet,

    #[error("vertex (level {level}, index {index}) is not occupied")]
    InvalidVertex { level: u32, index: u64 },

    #[error("vertex (level {level}, index {index}) carries zero mass")]
    ZeroMass { level: u32, index: u64 },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("invalid generator spec: {0}")]
    SpecInvalid(String),

    #[error(
        "hypothesis fails at vertex (level {level}, index {index}): \
         {found} usable descendants, {required} required"
    )]
    Hypothesis {
        level: u32,
        index: u64,
        found: u64,
        required: u64,
    },

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("mass invariant violated: {0}")]
    Mass(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("oracle failure: {0}")]
    Oracle(String),

    #[error("exact arithmetic overflow: {0}")]
    Precision(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable code, used in CLI error objects.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Range(_) => "RANGE",
            Error::Domain(_) => "DOMAIN",
            Error::EmptySet => "EMPTY_SET",
            Error::InvalidVertex { .. } => "INVALID_VERTEX",
            Error::ZeroMass { .. } => "ZERO_MASS",
            Error::Argument(_) => "ARGUMENT",
            Error::SpecInvalid(_) => "SPEC_INVALID",
            Error::Hypothesis { .. } => "HYPOTHESIS",
            Error::Resource(_) => "RESOURCE",
            Error::Mass(_) => "MASS_INVARIANT",
            Error::Parse { .. } => "PARSE",
            Error::Oracle(_) => "ORACLE",
            Error::Precision(_) => "PRECISION",
            Error::Io(_) => "IO",
            Error::Json(_) => "JSON",
        }
    }

    /// Process exit status: 2 for usage/validation problems, 3 for resource limits.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Resource(_) => 3,
            _ => 2,
        }
    }

    pub(crate) fn range(msg: impl Into<String>) -> Self {
        Error::Range(msg.into())
    }

    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn spec(msg: impl Into<String>) -> Self {
        Error::SpecInvalid(msg.into())
    }
}
