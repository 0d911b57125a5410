use thiserror::Error;

/// Everything that can go wrong in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty tuples are not allowed")]
    EmptyTuple,

    #[error("profile mismatch: {0}")]
    Structure(String),

    #[error("index out of range: {0}")]
    Index(String),

    #[error("semimodule kind mismatch: {0}")]
    Kind(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("stride divisibility condition violated: {0}")]
    StrideIndivisible(String),

    #[error("shape divisibility condition violated: {0}")]
    ShapeIndivisible(String),

    #[error("composition does not distribute over the modes of the right operand: {0}")]
    NonDistributive(String),

    #[error("no complement exists: {0}")]
    NotComplementable(String),

    #[error("no left inverse exists: {0}")]
    NotLeftInvertible(String),

    #[error("offset {offset} (index {index}) is not in the image of the layout")]
    Admissibility { index: i64, offset: i64 },

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("access at {index} is out of bounds for a buffer of length {len}")]
    OutOfBounds { index: i64, len: usize },

    #[error("table of {size} entries exceeds the bound {bound}")]
    TooLarge { size: i64, bound: i64 },

    #[error("syntax error at byte {offset}: {msg}")]
    Syntax { offset: usize, msg: String },

    #[error("mode {mode}: {source}")]
    InMode { mode: usize, source: Box<Error> },
}

impl Error {
    /// Attach a mode index to an error raised by a by-mode operation.
    pub fn in_mode(self, mode: usize) -> Error {
        Error::InMode { mode, source: Box::new(self) }
    }

    /// The innermost error, with mode annotations stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::InMode { source, .. } => source.root(),
            e => e,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
