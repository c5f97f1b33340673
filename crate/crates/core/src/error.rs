use thiserror::Error;

/// Errors raised by the GF(2) kernel, the code layer and the analysis layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected length {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("enumeration needs {required} codewords but the budget is {budget}")]
    BudgetExceeded { required: u64, budget: u64 },

    #[error("column {column} out of range for length {length}")]
    ColumnOutOfRange { column: usize, length: usize },

    #[error("cannot puncture a code of length {0}")]
    PunctureTooShort(usize),

    #[error("code family must contain at least one code")]
    EmptyFamily,

    #[error("code family has {0} members; at most {max} are supported", max = crate::family::MAX_FAMILY_SIZE)]
    FamilyTooLarge(usize),

    #[error("member code {index} is the zero code")]
    ZeroMember { index: usize },

    #[error("family size mismatch: {left} vs {right}")]
    FamilySizeMismatch { left: usize, right: usize },

    #[error("multi-index member {member} out of range 1..={size}")]
    IndexOutOfRange { member: usize, size: usize },

    #[error("multi-index must be nonempty")]
    EmptyMultiIndex,

    #[error("vector lies in no member code of the family")]
    NotInUnion,

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("family {0} is not embedded in its declared order")]
    NotEmbedded(&'static str),

    #[error("tag set has {0} members; subset enumeration is capped at {max}", max = crate::analysis::MAX_TAG_SET)]
    TagSetTooLarge(usize),

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
