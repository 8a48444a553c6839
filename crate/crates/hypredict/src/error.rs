//! Crate-wide error type.
//!
//! Errors are split by what the caller can do about them: validation problems
//! (bad flags, malformed or inconsistent input files) map to exit code 1,
//! runtime failures (numeric divergence, I/O breakage mid-run) map to exit
//! code 2.  Success is 0.  The split gives scripts a stable contract.

use thiserror::Error;

/// Anything that can go wrong across the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed invocation or input the user can fix: unknown flag values,
    /// missing files, inputs that fail validation.
    #[error("usage: {0}")]
    Usage(String),

    /// A hypergraph failed structural validation (out-of-range node index,
    /// feature-row count mismatch, and so on).
    #[error("invalid hypergraph: {0}")]
    InvalidHypergraph(String),

    /// A checkpoint file could not be decoded or did not match the model
    /// being restored.
    #[error("checkpoint: {0}")]
    Checkpoint(String),

    /// Training diverged or produced a non-finite loss.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// A negative sampler could not produce a valid candidate within its
    /// retry budget (for example, the graph has no connected set of the
    /// requested size).
    #[error("sampler exhausted: {0}")]
    Sampler(String),

    /// Underlying I/O failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),

    /// JSON (de)serialisation failure.
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code the CLI should use for this error: `1` for
    /// validation errors, `2` for runtime/numeric failures (`0` is success
    /// and never produced here).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::InvalidHypergraph(_) | Error::Checkpoint(_) | Error::Json(_) => 1,
            Error::Numeric(_) | Error::Sampler(_) | Error::Io(_) => 2,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_errors_exit_1() {
        assert_eq!(Error::Usage("bad flag".into()).exit_code(), 1);
        assert_eq!(Error::InvalidHypergraph("node 9 out of range".into()).exit_code(), 1);
        assert_eq!(Error::Checkpoint("shape mismatch".into()).exit_code(), 1);
    }

    #[test]
    fn runtime_errors_exit_2() {
        assert_eq!(Error::Numeric("loss is NaN".into()).exit_code(), 2);
        assert_eq!(Error::Sampler("no connected set of size 5".into()).exit_code(), 2);
        assert_eq!(
            Error::Io(std::io::Error::new(std::io::ErrorKind::BrokenPipe, "x")).exit_code(),
            2
        );
    }

    #[test]
    fn display_is_informative() {
        let e = Error::InvalidHypergraph("node 9 out of range (num_nodes = 4)".into());
        assert!(e.to_string().contains("node 9"));
    }
}
