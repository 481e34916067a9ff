use std::collections::HashMap;
use std::thread;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::corpus::Passage;

use super::{AnswerCandidate, ReaderError, Scored, Scorer};

pub const DEFAULT_MAX_IN_FLIGHT: usize = 8;
const DEFAULT_BATCH: usize = 16;

#[derive(Serialize)]
struct WireSentence<'a> {
    id: &'a str,
    text: &'a str,
}

#[derive(Serialize)]
struct WirePassage<'a> {
    id: &'a str,
    sentences: Vec<WireSentence<'a>>,
}

#[derive(Serialize)]
struct ScoreRequest<'a> {
    question: &'a str,
    passages: Vec<WirePassage<'a>>,
    top_k: usize,
}

#[derive(Deserialize)]
struct WireCandidate {
    passage_id: String,
    sentence_id: String,
    answer_text: String,
    confidence: f64,
}

#[derive(Deserialize)]
struct ScoreResponse {
    candidates: Vec<WireCandidate>,
}

/// Client for an external reader speaking the `POST {endpoint}/score` protocol.
///
/// Passages go out in batches with at most `max_in_flight` requests open at
/// once.
pub struct RemoteScorer {
    endpoint: String,
    agent: ureq::Agent,
    batch_size: usize,
    max_in_flight: usize,
    name: String,
}

impl RemoteScorer {
    pub fn new(endpoint: impl Into<String>, timeout_ms: u64) -> Self {
        let endpoint = endpoint.into().trim_end_matches('/').to_string();
        let config = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_millis(timeout_ms)))
            .http_status_as_error(false)
            .build();
        RemoteScorer {
            name: format!("remote={endpoint}"),
            endpoint,
            agent: ureq::Agent::new_with_config(config),
            batch_size: DEFAULT_BATCH,
            max_in_flight: DEFAULT_MAX_IN_FLIGHT,
        }
    }

    pub fn with_limits(mut self, batch_size: usize, max_in_flight: usize) -> Self {
        self.batch_size = batch_size.max(1);
        self.max_in_flight = max_in_flight.max(1);
        self
    }

    pub fn endpoint(&self) -> &str {
        &self.endpoint
    }

    fn transport(&self, reason: impl ToString) -> ReaderError {
        ReaderError::Transport {
            endpoint: self.endpoint.clone(),
            reason: reason.to_string(),
        }
    }

    fn protocol(&self, reason: impl ToString) -> ReaderError {
        ReaderError::Protocol {
            endpoint: self.endpoint.clone(),
            reason: reason.to_string(),
        }
    }

    fn request(&self, question: &str, batch: &[Passage], top_k: usize) -> Result<Scored, ReaderError> {
        let body = ScoreRequest {
            question,
            passages: batch
                .iter()
                .map(|p| WirePassage {
                    id: &p.id,
                    sentences: p
                        .sentences
                        .iter()
                        .map(|s| WireSentence { id: &s.id, text: &s.text })
                        .collect(),
                })
                .collect(),
            top_k,
        };
        let url = format!("{}/score", self.endpoint);
        let mut resp = self
            .agent
            .post(&url)
            .send_json(&body)
            .map_err(|e| self.transport(e))?;
        let status = resp.status().as_u16();
        if status != 200 {
            return Err(self.transport(format!("HTTP {status}")));
        }
        let parsed: ScoreResponse = resp
            .body_mut()
            .read_json()
            .map_err(|e| self.protocol(e))?;

        let by_id: HashMap<&str, &Passage> = batch.iter().map(|p| (p.id.as_str(), p)).collect();
        let mut out = Scored::default();
        let mut seen = std::collections::HashSet::new();
        for c in parsed.candidates {
            let passage = by_id
                .get(c.passage_id.as_str())
                .ok_or_else(|| self.protocol(format!("unknown passage id {}", c.passage_id)))?;
            if !passage.contains(&c.sentence_id) {
                return Err(self.protocol(format!(
                    "sentence {} is not in passage {}",
                    c.sentence_id, c.passage_id
                )));
            }
            if !seen.insert(c.passage_id.clone()) {
                return Err(self.protocol(format!("passage {} scored twice", c.passage_id)));
            }
            if c.confidence.is_nan() {
                return Err(self.protocol(format!("NaN confidence for {}", c.sentence_id)));
            }
            let mut confidence = c.confidence;
            if !(0.0..=1.0).contains(&confidence) {
                let note = format!(
                    "confidence {confidence} for {} clamped into [0, 1]",
                    c.sentence_id
                );
                tracing::warn!(endpoint = %self.endpoint, "{note}");
                out.warnings.push(note);
                confidence = confidence.clamp(0.0, 1.0);
            }
            out.candidates.push(AnswerCandidate {
                passage_id: c.passage_id,
                sentence_id: c.sentence_id,
                answer_text: c.answer_text,
                confidence,
                scorer_name: self.name.clone(),
            });
        }
        Ok(out)
    }
}

impl Scorer for RemoteScorer {
    fn name(&self) -> &str {
        &self.name
    }

    fn score(&self, question: &str, passages: &[Passage], top_k: usize) -> Result<Scored, ReaderError> {
        let batches: Vec<&[Passage]> = passages.chunks(self.batch_size).collect();
        let mut results: Vec<Result<Scored, ReaderError>> = Vec::with_capacity(batches.len());
        for wave in batches.chunks(self.max_in_flight) {
            let wave_results: Vec<_> = thread::scope(|scope| {
                let handles: Vec<_> = wave
                    .iter()
                    .map(|batch| scope.spawn(move || self.request(question, batch, top_k)))
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().unwrap_or_else(|_| Err(self.transport("request thread panicked"))))
                    .collect()
            });
            results.extend(wave_results);
        }
        let mut merged = Scored::default();
        for r in results {
            let r = r?;
            merged.candidates.extend(r.candidates);
            merged.warnings.extend(r.warnings);
        }
        Ok(merged)
    }
}
