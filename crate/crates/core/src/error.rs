use thiserror::Error;

/// Errors produced by the kernel, the experiment tools and the file format.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("multi-index length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("multi-index {lower} is not dominated by {upper}")]
    NotDominated { lower: String, upper: String },

    #[error("rank {rank} out of range for weight {weight} (only {count} indices)")]
    RankOutOfRange {
        rank: usize,
        weight: u32,
        count: usize,
    },

    #[error("division by zero")]
    DivisionByZero,

    #[error(
        "context mismatch: (n={left_vars}, D={left_degree}) vs (n={right_vars}, D={right_degree})"
    )]
    ContextMismatch {
        left_vars: usize,
        left_degree: u32,
        right_vars: usize,
        right_degree: u32,
    },

    #[error("invalid context: {0}")]
    InvalidContext(String),

    #[error("linear part is not the identity: {0}")]
    NonIdentityLinearPart(String),

    #[error("constant term is not allowed: {0}")]
    ConstantTerm(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error("verification mismatch: {0}")]
    Verification(String),

    #[error("line {line}: {message}")]
    Format { line: usize, message: String },

    #[error("line {line}: duplicate term for component {component}")]
    DuplicateTerm { line: usize, component: usize },

    #[error("line {line}: total degree {degree} exceeds the declared cap {cap}")]
    DegreeOverflow { line: usize, degree: u32, cap: u32 },
}

impl Error {
    /// Process exit code used by the command line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Format { .. } | Error::DuplicateTerm { .. } | Error::DegreeOverflow { .. } => 2,
            Error::NonIdentityLinearPart(_) | Error::ConstantTerm(_) | Error::Precondition(_) => 3,
            Error::Verification(_) => 4,
            Error::ResourceCap(_) => 5,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
