//! Extractive answer scoring behind a common [`Scorer`] contract.
//!
//! A scorer returns at most one candidate per passage, the best sentence in
//! it. [`rank_candidates`] applies the shared total order so results do not
//! depend on scorer completion order.

mod lexical;
mod remote;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{Passage, Tokenizer};

pub use lexical::{lexical_score, Idf, LexicalScorer};
pub use remote::{RemoteScorer, DEFAULT_MAX_IN_FLIGHT};

#[derive(Debug, Error)]
pub enum ReaderError {
    #[error("no passages to score")]
    NoPassages,
    #[error("k must be at least 1")]
    ZeroK,
    #[error("scorer at {endpoint} unreachable: {reason}")]
    Transport { endpoint: String, reason: String },
    #[error("scorer at {endpoint} returned an invalid response: {reason}")]
    Protocol { endpoint: String, reason: String },
    #[error("invalid scorer spec {spec:?}: {reason}")]
    Spec { spec: String, reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnswerCandidate {
    pub passage_id: String,
    pub sentence_id: String,
    pub answer_text: String,
    pub confidence: f64,
    pub scorer_name: String,
}

/// Scorer output plus any non-fatal protocol notes.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Scored {
    pub candidates: Vec<AnswerCandidate>,
    pub warnings: Vec<String>,
}

pub trait Scorer: Send + Sync {
    fn name(&self) -> &str;

    /// Scores `passages` for `question`. Implementations return at most one
    /// candidate per passage with confidence in [0, 1].
    fn score(&self, question: &str, passages: &[Passage], top_k: usize) -> Result<Scored, ReaderError>;
}

/// Confidence descending, then passage id, then sentence id.
pub fn candidate_order(a: &AnswerCandidate, b: &AnswerCandidate) -> Ordering {
    b.confidence
        .total_cmp(&a.confidence)
        .then_with(|| a.passage_id.cmp(&b.passage_id))
        .then_with(|| a.sentence_id.cmp(&b.sentence_id))
}

/// Deterministically ranked top `k` candidates.
pub fn rank_candidates(
    scorer: &dyn Scorer,
    question: &str,
    passages: &[Passage],
    k: usize,
) -> Result<Scored, ReaderError> {
    if k == 0 {
        return Err(ReaderError::ZeroK);
    }
    if passages.is_empty() {
        return Err(ReaderError::NoPassages);
    }
    let mut scored = scorer.score(question, passages, k)?;
    scored.candidates.sort_by(candidate_order);
    scored.candidates.truncate(k);
    Ok(scored)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScorerKind {
    Lexical,
    Remote,
}

/// `lexical`, `remote` or `remote=<url>`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScorerSpec {
    pub kind: ScorerKind,
    pub endpoint: Option<String>,
    pub timeout_ms: u64,
}

pub const DEFAULT_TIMEOUT_MS: u64 = 10_000;

impl ScorerSpec {
    pub fn lexical() -> Self {
        ScorerSpec {
            kind: ScorerKind::Lexical,
            endpoint: None,
            timeout_ms: DEFAULT_TIMEOUT_MS,
        }
    }

    pub fn remote(endpoint: impl Into<String>) -> Self {
        ScorerSpec {
            kind: ScorerKind::Remote,
            endpoint: Some(endpoint.into()),
            timeout_ms: DEFAULT_TIMEOUT_MS,
        }
    }

    /// Fills a missing remote endpoint from `default`.
    pub fn with_default_endpoint(mut self, default: Option<&str>) -> Self {
        if self.kind == ScorerKind::Remote && self.endpoint.is_none() {
            self.endpoint = default.map(str::to_string);
        }
        self
    }

    pub fn build(
        &self,
        tokenizer: Arc<dyn Tokenizer>,
        idf: Arc<Idf>,
    ) -> Result<Box<dyn Scorer>, ReaderError> {
        match self.kind {
            ScorerKind::Lexical => Ok(Box::new(LexicalScorer::new(tokenizer, idf))),
            ScorerKind::Remote => {
                let endpoint = self.endpoint.clone().ok_or_else(|| ReaderError::Spec {
                    spec: self.to_string(),
                    reason: "remote scorer needs an endpoint".into(),
                })?;
                Ok(Box::new(RemoteScorer::new(endpoint, self.timeout_ms)))
            }
        }
    }
}

impl fmt::Display for ScorerSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.kind, &self.endpoint) {
            (ScorerKind::Lexical, _) => f.write_str("lexical"),
            (ScorerKind::Remote, Some(url)) => write!(f, "remote={url}"),
            (ScorerKind::Remote, None) => f.write_str("remote"),
        }
    }
}

impl FromStr for ScorerSpec {
    type Err = ReaderError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = |reason: &str| ReaderError::Spec {
            spec: s.to_string(),
            reason: reason.to_string(),
        };
        match s.split_once('=') {
            None if s == "lexical" => Ok(ScorerSpec::lexical()),
            None if s == "remote" => Ok(ScorerSpec {
                kind: ScorerKind::Remote,
                endpoint: None,
                timeout_ms: DEFAULT_TIMEOUT_MS,
            }),
            Some(("remote", url)) => {
                let url = url.trim();
                if !(url.starts_with("http://") || url.starts_with("https://")) {
                    return Err(bad("endpoint must be an http(s) URL"));
                }
                Ok(ScorerSpec::remote(url.trim_end_matches('/')))
            }
            _ => Err(bad("expected lexical, remote or remote=<url>")),
        }
    }
}
