use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("window side must be odd and at least 3, got {0}")]
    WindowSize(usize),

    #[error("pixel ({row}, {col}) is outside a {rows}x{cols} image (indices are 1-based)")]
    OutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },

    #[error("image dimensions differ: {expected:?} vs {found:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },

    #[error("expected {expected} pixels for the given dimensions, found {found}")]
    PixelCount { expected: usize, found: usize },

    #[error("image dimensions must be positive")]
    EmptyImage,

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("filter spec `{spec}`: {reason}")]
    SpecSyntax { spec: String, reason: String },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
