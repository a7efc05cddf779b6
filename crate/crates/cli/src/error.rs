//! CLI error type with stable exit codes.

/// Exit codes: 0 success, 2 validation failure, 3 parse/schema failure,
/// 4 unreadable input. Clap keeps its own exit 2 for usage errors.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error in {field}: {message}")]
    Parse { field: String, message: String },
    #[error("validation failed: {0}")]
    Validation(String),
    #[error(transparent)]
    Core(#[from] steerlab_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 4,
            CliError::Parse { .. } => 3,
            CliError::Validation(_) => 2,
            // Domain violations surfaced by the kernel count as validation.
            CliError::Core(_) => 2,
        }
    }
}
