use std::path::Path;

use irony_core::corpus::CorpusError;
use irony_core::eval::EvalError;
use irony_core::features::FeatureError;
use irony_core::learn::LearnError;
use irony_core::lexical::LexicalError;
use irony_core::sentiment::SentimentError;
use irony_core::topics::TopicError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{file}: line {line}: {message}")]
    Config {
        file: String,
        line: usize,
        message: String,
    },
    #[error("path does not exist: {0}")]
    MissingPath(String),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("{path}: feature layout {found} does not match the model's {expected}")]
    FingerprintMismatch {
        path: String,
        expected: String,
        found: String,
    },
    #[error("{path}: matrix has no {feature} block")]
    MissingFeature { path: String, feature: String },
    #[error("{path}: {source}")]
    Matrix {
        path: String,
        #[source]
        source: FeatureError,
    },
    #[error("{0}: rows without a truth label")]
    Unlabeled(String),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Sentiment(#[from] SentimentError),
    #[error(transparent)]
    Lexical(#[from] LexicalError),
    #[error(transparent)]
    Topic(#[from] TopicError),
    #[error(transparent)]
    Features(#[from] FeatureError),
    #[error(transparent)]
    Learn(#[from] LearnError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> CliError {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    pub fn json(path: &Path, source: serde_json::Error) -> CliError {
        CliError::Json {
            path: path.display().to_string(),
            source,
        }
    }

    /// Process exit status; 2 is left to argument parsing.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config { .. } | CliError::MissingPath(_) => 64,
            CliError::Io { .. } | CliError::Json { .. } => 74,
            CliError::FingerprintMismatch { .. } | CliError::MissingFeature { .. } => 65,
            CliError::Unlabeled(_) => 65,
            CliError::Corpus(_) => 3,
            CliError::Matrix { .. } => 4,
            CliError::Sentiment(_)
            | CliError::Lexical(_)
            | CliError::Topic(_)
            | CliError::Features(_) => 4,
            CliError::Learn(_) => 5,
            CliError::Eval(_) => 6,
        }
    }
}
