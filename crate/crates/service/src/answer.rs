use std::num::NonZeroUsize;
use std::sync::{Arc, Mutex};

use cpgctx_core::augment::{answer_question, AnswerStatus, AugmentContext, StrategyConfig};
use cpgctx_core::corpus::Grade;
use cpgctx_core::numeric::{range_verdict, verdict_answer, CompareConfig};
use cpgctx_core::questions::{answer_summary, AnswerSource, QuestionType};
use cpgctx_core::reader::ScorerSpec;
use lru::LruCache;
use serde::{Deserialize, Serialize};

use crate::error::ServiceError;
use crate::store::Store;

fn base() -> String {
    "base".into()
}

fn lexical() -> String {
    "lexical".into()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnswerRequest {
    #[serde(default = "base")]
    pub strategy: String,
    #[serde(default = "lexical")]
    pub scorer: String,
}

impl Default for AnswerRequest {
    fn default() -> Self {
        AnswerRequest {
            strategy: base(),
            scorer: lexical(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Answer {
    pub text: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub confidence: Option<f64>,
    pub source: AnswerSource,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strategy: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sentence_id: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grade: Option<Grade>,
    /// Lab-value questions only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub in_range: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnswerResponse {
    pub question_id: String,
    pub qtype: QuestionType,
    pub strategy: String,
    pub scorer: String,
    pub status: AnswerStatus,
    pub answers: Vec<Answer>,
    pub warnings: Vec<String>,
}

type Key = (String, String, String, String);

/// LRU of answers keyed by (patient, question, strategy, scorer).
pub struct AnswerCache {
    inner: Mutex<LruCache<Key, Arc<AnswerResponse>>>,
}

impl AnswerCache {
    pub fn new(capacity: usize) -> Self {
        let cap = NonZeroUsize::new(capacity).unwrap_or(NonZeroUsize::MIN);
        AnswerCache {
            inner: Mutex::new(LruCache::new(cap)),
        }
    }

    fn get(&self, key: &Key) -> Option<Arc<AnswerResponse>> {
        self.inner.lock().unwrap_or_else(|e| e.into_inner()).get(key).cloned()
    }

    fn put(&self, key: Key, value: Arc<AnswerResponse>) {
        self.inner.lock().unwrap_or_else(|e| e.into_inner()).put(key, value);
    }

    pub fn len(&self) -> usize {
        self.inner.lock().unwrap_or_else(|e| e.into_inner()).len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn parse_request(store: &Store, req: &AnswerRequest) -> Result<(StrategyConfig, ScorerSpec), ServiceError> {
    let strategy = req.strategy.parse::<StrategyConfig>()?.with_top_k(store.config.top_k);
    let mut scorer: ScorerSpec = req
        .scorer
        .parse()
        .map_err(|e: cpgctx_core::reader::ReaderError| ServiceError::BadScorer(e.to_string()))?;
    scorer = scorer.with_default_endpoint(store.config.scorer_endpoint.as_deref());
    scorer.timeout_ms = store.config.scorer_timeout_ms;
    Ok((strategy, scorer))
}

/// Answers one generated question. The CLI and the HTTP route both call this.
pub fn answer(
    store: &Store,
    cache: Option<&AnswerCache>,
    patient_id: &str,
    question_id: &str,
    req: &AnswerRequest,
) -> Result<Arc<AnswerResponse>, ServiceError> {
    let patient = store.patient(patient_id)?;
    let question = store.questions[patient_id]
        .questions
        .iter()
        .find(|q| q.id == question_id)
        .ok_or_else(|| ServiceError::UnknownQuestion {
            patient: patient_id.to_string(),
            question: question_id.to_string(),
        })?;
    let (strategy, scorer_spec) = parse_request(store, req)?;
    let key = (
        patient_id.to_string(),
        question_id.to_string(),
        strategy.to_string(),
        scorer_spec.to_string(),
    );
    if let Some(hit) = cache.and_then(|c| c.get(&key)) {
        return Ok(hit);
    }

    let response = if !question.qtype.uses_reader() {
        let t = answer_summary(question, patient, &store.config.population, &store.ccs)
            .map_err(|e| ServiceError::Internal(e.to_string()))?;
        AnswerResponse {
            question_id: question.id.clone(),
            qtype: question.qtype,
            strategy: key.2.clone(),
            scorer: key.3.clone(),
            status: AnswerStatus::Answered,
            answers: vec![Answer {
                text: t.text,
                confidence: None,
                source: t.sources.first().copied().unwrap_or(AnswerSource::PatientData),
                strategy: None,
                sentence_id: None,
                grade: None,
                in_range: None,
            }],
            warnings: Vec::new(),
        }
    } else {
        let scorer = scorer_spec
            .build(store.tokenizer.clone(), store.idf.clone())
            .map_err(|e| ServiceError::BadScorer(e.to_string()))?;
        let ctx = AugmentContext {
            passages: &store.passages,
            knowledge: &store.knowledge,
            tokenizer: store.tokenizer.as_ref(),
            max_tokens: store.config.max_tokens,
        };
        let outcome = answer_question(question, &strategy, scorer.as_ref(), ctx)?;
        let compare = CompareConfig::default();
        let mut answers = Vec::with_capacity(outcome.candidates.len());
        for c in &outcome.candidates {
            let grade = store.index.get(&c.base.sentence_id).and_then(|s| s.grade);
            let (text, in_range) = if question.qtype == QuestionType::LabValue {
                let verdict = range_verdict(&question.text, &c.base.answer_text, &compare);
                let t = verdict_answer(&verdict, &c.base).map_err(|e| ServiceError::Internal(e.to_string()))?;
                (t.text, Some(verdict.in_range && !verdict.matched_pairs.is_empty()))
            } else {
                (c.base.answer_text.clone(), None)
            };
            answers.push(Answer {
                text,
                confidence: Some(c.base.confidence),
                source: AnswerSource::Guideline,
                strategy: Some(c.strategy.clone()),
                sentence_id: Some(c.base.sentence_id.clone()),
                grade,
                in_range,
            });
        }
        AnswerResponse {
            question_id: question.id.clone(),
            qtype: question.qtype,
            strategy: outcome.strategy,
            scorer: key.3.clone(),
            status: outcome.status,
            answers,
            warnings: outcome.warnings,
        }
    };
    let response = Arc::new(response);
    if let Some(c) = cache {
        c.put(key, response.clone());
    }
    Ok(response)
}
