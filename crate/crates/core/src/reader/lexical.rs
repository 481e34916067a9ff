use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::corpus::{Passage, Tokenizer};

use super::{AnswerCandidate, ReaderError, Scored, Scorer};

/// Smoothed inverse document frequency over a sentence collection:
/// `ln((N + 1) / (df + 1)) + 1`. Unseen tokens take the `df = 0` weight.
#[derive(Debug, Clone, Default)]
pub struct Idf {
    documents: usize,
    df: HashMap<String, usize>,
}

impl Idf {
    pub fn from_documents<I, D, T>(documents: I) -> Self
    where
        I: IntoIterator<Item = D>,
        D: IntoIterator<Item = T>,
        T: Into<String>,
    {
        let mut idf = Idf::default();
        for doc in documents {
            idf.documents += 1;
            let distinct: BTreeSet<String> = doc.into_iter().map(Into::into).collect();
            for t in distinct {
                *idf.df.entry(t).or_default() += 1;
            }
        }
        idf
    }

    pub fn from_texts<'a>(tokenizer: &dyn Tokenizer, texts: impl IntoIterator<Item = &'a str>) -> Self {
        Self::from_documents(texts.into_iter().map(|t| tokenizer.tokenize(t)))
    }

    pub fn documents(&self) -> usize {
        self.documents
    }

    pub fn weight(&self, token: &str) -> f64 {
        let n = self.documents as f64;
        let df = self.df.get(token).copied().unwrap_or(0) as f64;
        ((n + 1.0) / (df + 1.0)).ln() + 1.0
    }
}

/// IDF mass of question tokens present in the sentence over the IDF mass of
/// all question tokens. Both sums run in sorted token order.
pub fn lexical_score(question: &BTreeSet<String>, sentence: &BTreeSet<String>, idf: &Idf) -> f64 {
    let mut shared = 0.0;
    let mut total = 0.0;
    for t in question {
        let w = idf.weight(t);
        total += w;
        if sentence.contains(t) {
            shared += w;
        }
    }
    if shared == 0.0 || total == 0.0 {
        0.0
    } else {
        (shared / total).clamp(0.0, 1.0)
    }
}

/// Deterministic IDF-weighted token-overlap scorer.
pub struct LexicalScorer {
    tokenizer: Arc<dyn Tokenizer>,
    idf: Arc<Idf>,
    name: String,
}

impl LexicalScorer {
    pub fn new(tokenizer: Arc<dyn Tokenizer>, idf: Arc<Idf>) -> Self {
        let name = format!("lexical/{}", tokenizer.name());
        LexicalScorer { tokenizer, idf, name }
    }

    fn token_set(&self, text: &str) -> BTreeSet<String> {
        self.tokenizer.tokenize(text).into_iter().collect()
    }
}

impl Scorer for LexicalScorer {
    fn name(&self) -> &str {
        &self.name
    }

    fn score(&self, question: &str, passages: &[Passage], _top_k: usize) -> Result<Scored, ReaderError> {
        let q = self.token_set(question);
        let mut candidates = Vec::with_capacity(passages.len());
        for p in passages {
            let mut best: Option<(f64, usize)> = None;
            for (i, s) in p.sentences.iter().enumerate() {
                let score = lexical_score(&q, &self.token_set(&s.text), &self.idf);
                if best.is_none_or(|(b, _)| score > b) {
                    best = Some((score, i));
                }
            }
            if let Some((confidence, i)) = best {
                let s = &p.sentences[i];
                candidates.push(AnswerCandidate {
                    passage_id: p.id.clone(),
                    sentence_id: s.id.clone(),
                    answer_text: s.text.clone(),
                    confidence,
                    scorer_name: self.name.clone(),
                });
            }
        }
        Ok(Scored {
            candidates,
            warnings: Vec::new(),
        })
    }
}
