use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum AppError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] forman_core::Error),
    #[error("validation failed\n{0}")]
    Validation(String),
}

impl AppError {
    pub fn parse(line: usize, message: impl Into<String>) -> Self {
        AppError::Parse {
            line,
            message: message.into(),
        }
    }

    /// 0 success, 1 validation failure, 2 input error, 3 resource guard.
    pub fn exit_code(&self) -> u8 {
        use forman_core::Error as E;
        match self {
            AppError::Io { .. } | AppError::Parse { .. } | AppError::Usage(_) => 2,
            AppError::Validation(_) => 1,
            AppError::Core(e) => match e {
                E::CliqueCapExceeded { .. }
                | E::DimensionCap { .. }
                | E::QueueCapExceeded(_)
                | E::OracleGuard { .. } => 3,
                E::MatchingViolation(_)
                | E::CorruptGradient(_)
                | E::InvalidGradient(_)
                | E::BoundaryComposition(_)
                | E::InvalidSequence(_) => 1,
                _ => 2,
            },
        }
    }
}

pub type AppResult<T> = Result<T, AppError>;
