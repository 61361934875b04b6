use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("mask has no foreground pixels")]
    EmptyMask,

    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },

    #[error("image {width}x{height} is too small (need at least 2x2)")]
    TooSmall { width: usize, height: usize },

    #[error("invalid image: {0}")]
    InvalidImage(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("non-finite value in column '{column}' at sample '{sample}'")]
    NonFinite { column: String, sample: String },

    #[error("duplicate column name '{0}'")]
    DuplicateColumn(String),

    #[error(
        "sample ids differ between matrices (first mismatch at row {row}: '{left}' vs '{right}')"
    )]
    SampleMismatch {
        row: usize,
        left: String,
        right: String,
    },

    #[error("too few samples: need at least {needed}, found {found}")]
    TooFewSamples { needed: usize, found: usize },

    #[error("class {class} has {count} samples, fewer than the {k} folds requested")]
    ClassTooSmall { class: u8, count: usize, k: usize },

    #[error("only one class present; both benign and malignant samples are required")]
    SingleClass,

    #[error("all feature columns were removed by the variance filter")]
    AllColumnsRemoved,

    #[error("feature '{0}' required by the model is missing")]
    MissingFeature(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("feature name '{0}' cannot be resolved to a (category, base name, source) triple")]
    UnresolvableName(String),

    #[error("labels are required for this operation")]
    MissingLabels,

    #[error("invalid file contents: {0}")]
    Format(String),

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Png(#[from] png::DecodingError),

    #[error(transparent)]
    PngEncode(#[from] png::EncodingError),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Wraps the error with a description of what was being done.
    pub fn context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// The innermost error, skipping any context layers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Context { source, .. } => source.root(),
            other => other,
        }
    }

    /// True for failures caused by degenerate data rather than malformed input.
    pub fn is_degenerate_data(&self) -> bool {
        matches!(
            self.root(),
            Error::SingleClass
                | Error::AllColumnsRemoved
                | Error::ClassTooSmall { .. }
                | Error::TooFewSamples { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
