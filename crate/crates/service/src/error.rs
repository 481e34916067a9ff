use cpgctx_core::augment::{AugmentError, StrategyParseError};
use cpgctx_core::reader::ReaderError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error("config: {0}")]
    Config(String),
    #[error("loading {what}: {reason}")]
    Load { what: &'static str, reason: String },
    #[error("store not loaded")]
    NotLoaded,
    #[error("unknown patient {0}")]
    UnknownPatient(String),
    #[error("patient {patient} has no question {question}")]
    UnknownQuestion { patient: String, question: String },
    #[error(transparent)]
    BadStrategy(#[from] StrategyParseError),
    #[error("bad scorer: {0}")]
    BadScorer(String),
    #[error("scorer failed: {0}")]
    Scorer(ReaderError),
    #[error("{0}")]
    Internal(String),
}

impl ServiceError {
    /// HTTP status code for this error.
    pub fn status(&self) -> u16 {
        match self {
            ServiceError::NotLoaded => 503,
            ServiceError::UnknownPatient(_) | ServiceError::UnknownQuestion { .. } => 404,
            ServiceError::BadStrategy(_) | ServiceError::BadScorer(_) => 400,
            ServiceError::Scorer(_) => 502,
            ServiceError::Config(_) | ServiceError::Load { .. } | ServiceError::Internal(_) => 500,
        }
    }

    /// Short machine-readable tag for error bodies.
    pub fn code(&self) -> &'static str {
        match self {
            ServiceError::Config(_) => "config",
            ServiceError::Load { .. } => "load",
            ServiceError::NotLoaded => "not_loaded",
            ServiceError::UnknownPatient(_) => "unknown_patient",
            ServiceError::UnknownQuestion { .. } => "unknown_question",
            ServiceError::BadStrategy(_) => "bad_strategy",
            ServiceError::BadScorer(_) => "bad_scorer",
            ServiceError::Scorer(_) => "scorer_failed",
            ServiceError::Internal(_) => "internal",
        }
    }
}

impl From<AugmentError> for ServiceError {
    fn from(e: AugmentError) -> Self {
        match e {
            AugmentError::Reader(r @ (ReaderError::Transport { .. } | ReaderError::Protocol { .. })) => {
                ServiceError::Scorer(r)
            }
            other => ServiceError::Internal(other.to_string()),
        }
    }
}
