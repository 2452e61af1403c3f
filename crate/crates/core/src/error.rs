use std::fmt;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A single rejected input row, with the 1-based line number in the source file.
#[derive(Debug, Clone, PartialEq)]
pub struct RowError {
    pub line: u64,
    pub message: String,
}

impl fmt::Display for RowError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{context}: invalid CSV: {source}")]
    Csv {
        context: String,
        #[source]
        source: csv::Error,
    },

    #[error("{context}: invalid JSON: {source}")]
    Json {
        context: String,
        #[source]
        source: serde_json::Error,
    },

    #[error("{context}: missing required column `{column}`")]
    MissingColumn { context: String, column: String },

    #[error("{context}: {} malformed row(s):\n{}", .rows.len(), format_rows(.rows))]
    MalformedRows { context: String, rows: Vec<RowError> },

    #[error("duplicate ref_id `{ref_id}` (lines {first_line} and {line})")]
    DuplicateRef {
        ref_id: String,
        first_line: u64,
        line: u64,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("data validation failed: {0}")]
    Validation(String),

    #[error("unknown {kind} `{name}` (available: {available})")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        available: String,
    },
}

fn format_rows(rows: &[RowError]) -> String {
    rows.iter()
        .map(|r| format!("  {r}"))
        .collect::<Vec<_>>()
        .join("\n")
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// Process exit code for this error: 2 for usage, configuration and schema
    /// problems, 3 for inputs that parse but violate a data invariant.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. }
            | Error::Csv { .. }
            | Error::Json { .. }
            | Error::MissingColumn { .. }
            | Error::MalformedRows { .. }
            | Error::Config(_)
            | Error::UnknownStrategy { .. } => 2,
            Error::Domain(_) | Error::DuplicateRef { .. } | Error::Validation(_) => 3,
        }
    }
}
