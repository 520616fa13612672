//! Error type shared across the toolkit.
//!
//! Errors fall into three classes, each with its own process exit code:
//! input errors (unreadable or malformed data files), configuration
//! errors (invalid option combinations, incompatible preprocessing),
//! and numeric errors (fits refused, no admissible breakpoint).

use std::path::PathBuf;

/// Exit code for input errors (unreadable files, bad data, empty input).
pub const EXIT_INPUT: i32 = 10;
/// Exit code for configuration errors (bad options, incompatible configs).
pub const EXIT_CONFIG: i32 = 11;
/// Exit code for numeric errors (refused fits, no valid breakpoint).
pub const EXIT_NUMERIC: i32 = 12;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{id}: invalid UTF-8 at byte offset {offset}")]
    InvalidUnicode { id: String, offset: usize },

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("cannot merge tables: configuration fingerprints differ ({left} vs {right})")]
    FingerprintMismatch { left: String, right: String },

    #[error("review positions out of range (stream length {len}): {positions:?}")]
    PositionOutOfRange { len: usize, positions: Vec<usize> },

    #[error("fit refused: {0}")]
    FitRefused(String),

    #[error("no breakpoint candidate admits two valid segments in window [{lo}, {hi}]")]
    NoBreakpoint { lo: usize, hi: usize },

    #[error("trim target {target} exceeds available total of {available} tokens")]
    TargetExceedsTotal { target: u64, available: u64 },

    #[error("checksum mismatch for {path}: expected {expected}, got {actual}")]
    ChecksumMismatch {
        path: PathBuf,
        expected: String,
        actual: String,
    },

    #[error("download failed for {url}: {message}")]
    Fetch { url: String, message: String },

    #[error("failed to read {} corpus text(s):\n{}", reports.len(), reports.join("\n"))]
    CorpusRead { reports: Vec<String> },
}

impl Error {
    /// Process exit code for this error's class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. }
            | Error::Write { .. }
            | Error::InvalidUnicode { .. }
            | Error::EmptyInput(_)
            | Error::PositionOutOfRange { .. }
            | Error::ChecksumMismatch { .. }
            | Error::Fetch { .. }
            | Error::CorpusRead { .. } => EXIT_INPUT,
            Error::Parse { .. }
            | Error::Config(_)
            | Error::FingerprintMismatch { .. }
            | Error::TargetExceedsTotal { .. } => EXIT_CONFIG,
            Error::FitRefused(_) | Error::NoBreakpoint { .. } => EXIT_NUMERIC,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
