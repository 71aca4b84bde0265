use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("time series must have at least {min} samples, got {len}")]
    TooShort { len: usize, min: usize },

    #[error("time series contains a non-finite sample at index {index}")]
    NonFinite { index: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dataset {name}: {reason}")]
    InvalidDataset { name: String, reason: String },

    #[error("class {label} has {count} items, at least {min} are required")]
    ClassTooSmall {
        label: String,
        count: usize,
        min: usize,
    },

    #[error("distance table is {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    TableShape {
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },

    #[error("empty reference set")]
    EmptyReferences,

    #[error("missing error value for dataset {dataset}, measure {measure}")]
    MissingCell { dataset: String, measure: String },

    #[error("{path}:{line}: {reason}")]
    Parse {
        path: String,
        line: usize,
        reason: String,
    },

    #[error("cell {dataset}/{measure} repetition {repetition} fold {fold}: {source}")]
    Cell {
        dataset: String,
        measure: String,
        repetition: usize,
        fold: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}
