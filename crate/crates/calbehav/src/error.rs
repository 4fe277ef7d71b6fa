//! Crate-wide error type and per-line ingestion diagnostics.

use chrono::NaiveDate;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("call log is missing required column `{0}`")]
    MissingColumn(&'static str),
    #[error("window start {start} is after window end {end}")]
    InvalidWindow { start: NaiveDate, end: NaiveDate },
    #[error("no behavioral evidence: no classified call falls inside any calendar occurrence")]
    NoEvidence,
    #[error("{count} ingestion error(s) in {source_name}")]
    Ingestion { source_name: String, count: usize },
    #[error("need at least {folds} instances for {folds}-fold cross-validation, have {have}")]
    TooFewInstances { folds: usize, have: usize },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("invalid profile: {0}")]
    Profile(String),
    #[error("duplicate keyword after case folding: `{0}`")]
    DuplicateKeyword(String),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn io(context: impl Into<String>, source: std::io::Error) -> Error {
        Error::Io { context: context.into(), source }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    /// The input was accepted, possibly after a documented adjustment.
    Warning,
    /// The row or block was rejected and skipped.
    Error,
}

/// One ingestion problem, tied to the 1-based line of the offending input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub severity: Severity,
    pub message: String,
}

impl Diagnostic {
    pub fn error(line: usize, message: impl Into<String>) -> Diagnostic {
        Diagnostic { line, severity: Severity::Error, message: message.into() }
    }

    pub fn warning(line: usize, message: impl Into<String>) -> Diagnostic {
        Diagnostic { line, severity: Severity::Warning, message: message.into() }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        write!(f, "line {}: {}: {}", self.line, tag, self.message)
    }
}

/// Count of error-severity entries.
pub fn error_count(diagnostics: &[Diagnostic]) -> usize {
    diagnostics.iter().filter(|d| d.severity == Severity::Error).count()
}
