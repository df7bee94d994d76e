use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse { path: PathBuf, line: usize, message: String },
    #[error("{context}: {source}")]
    Runtime {
        context: String,
        #[source]
        source: clique_core::Error,
    },
    #[error("report: {0}")]
    Report(#[from] serde_json::Error),
    #[error("{0} run(s) disagree with the oracle")]
    Mismatch(usize),
}

impl HarnessError {
    /// 1 oracle mismatch, 2 config error, 3 runtime failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Mismatch(_) => 1,
            HarnessError::Config(_) | HarnessError::Parse { .. } => 2,
            HarnessError::Io { .. } | HarnessError::Runtime { .. } | HarnessError::Report(_) => 3,
        }
    }

    pub(crate) fn runtime(context: impl Into<String>) -> impl FnOnce(clique_core::Error) -> HarnessError {
        let context = context.into();
        move |source| HarnessError::Runtime { context, source }
    }

    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> HarnessError {
        let path = path.into();
        move |source| HarnessError::Io { path, source }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
