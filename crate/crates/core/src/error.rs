use std::path::PathBuf;

/// Errors produced by the dispersal library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("non-finite coordinate in input")]
    NonFinite,

    #[error("cluster count {k} out of range for {n} items")]
    InvalidK { k: usize, n: usize },

    #[error("size mismatch: expected {expected}, got {actual}")]
    SizeMismatch { expected: usize, actual: usize },

    #[error("degenerate matrix: all off-diagonal distances are equal")]
    DegenerateMatrix,

    #[error("no elbow: curve has no point below the descending diagonal")]
    NoElbow,

    #[error("combination guard exceeded: C({n}, {k}) > {limit}")]
    GuardExceeded { n: usize, k: usize, limit: u64 },

    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    #[error("distance failed for items ({i}, {j}): {source}")]
    Distance {
        i: usize,
        j: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("{path}: {msg}")]
    Format { path: PathBuf, msg: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Error {
        let path = path.into();
        move |source| Error::Io { path, source }
    }
}
