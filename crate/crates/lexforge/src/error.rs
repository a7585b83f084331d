use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = LexError> = std::result::Result<T, E>;

/// Exit status for each failure class, stable for scripting.
pub mod exit_code {
    pub const IO: u8 = 1;
    pub const CONFIG: u8 = 2;
    pub const MISSING_INPUT: u8 = 3;
    pub const DATA: u8 = 4;
    pub const ENCODING: u8 = 5;
    pub const DIVERGED: u8 = 6;
    pub const MISSING_ARTIFACT: u8 = 7;
    pub const MALFORMED: u8 = 8;
    pub const NOT_ONE_WORD: u8 = 9;
}

#[derive(Debug, Error)]
pub enum LexError {
    #[error("input file not found: {}", .0.display())]
    MissingInput(PathBuf),
    #[error("{}: line {line} is not valid UTF-8", .path.display())]
    Encoding { path: PathBuf, line: usize },
    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{}:{line}: {message}", .path.display())]
    Parse { path: PathBuf, line: usize, message: String },
    #[error("missing {}; run `lexforge {step}` first", .path.display())]
    MissingArtifact { path: PathBuf, step: &'static str },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{model} training diverged: loss became non-finite in epoch {epoch}")]
    Diverged { model: &'static str, epoch: usize },
    #[error(transparent)]
    Core(#[from] lexforge_core::Error),
}

impl LexError {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        LexError::Io { path: path.into(), source }
    }

    pub fn parse(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        LexError::Parse { path: path.into(), line, message: message.into() }
    }

    pub fn exit_code(&self) -> u8 {
        use lexforge_core::Error as Core;
        match self {
            LexError::MissingInput(_) => exit_code::MISSING_INPUT,
            LexError::Encoding { .. } => exit_code::ENCODING,
            LexError::Io { .. } => exit_code::IO,
            LexError::Parse { .. } => exit_code::MALFORMED,
            LexError::MissingArtifact { .. } => exit_code::MISSING_ARTIFACT,
            LexError::Config(_) => exit_code::CONFIG,
            LexError::Diverged { .. } => exit_code::DIVERGED,
            LexError::Core(Core::NonFiniteLoss { .. }) => exit_code::DIVERGED,
            LexError::Core(Core::NotSingleWord { .. }) => exit_code::NOT_ONE_WORD,
            LexError::Core(Core::InvalidHyperparameter(_) | Core::InvalidFraction(_) | Core::InvalidNgramRange { .. } | Core::InvalidMinFreq) => {
                exit_code::CONFIG
            }
            LexError::Core(Core::VocabularyMismatch { .. } | Core::ShapeMismatch { .. }) => exit_code::MALFORMED,
            LexError::Core(_) => exit_code::DATA,
        }
    }
}
