//! Knowledge augmentation around the reader.
//!
//! Pre-filters shrink the sentence pool before scoring using concept
//! annotations or ontology distance. Post-sorts rerank the reader's top
//! answers by disease overlap, hop sums and ancestor counts.

mod features;
mod filter;
mod strategy;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{rechunk, CorpusError, Passage, Tokenizer};
use crate::ontology::{AnnotationSet, ConceptAnnotation, ConceptFilter, KnowledgeBase};
use crate::questions::{QuestionInstance, QuestionType};
use crate::reader::{rank_candidates, ReaderError, Scorer};

pub use features::{ancestor_count, concept_codes, disease_overlap, hop_sum, postsort, AugmentedCandidate};
pub use filter::{prefilter_ontology, prefilter_semantic, ConceptMatch, Filtered, SemanticFilter};
pub use strategy::{
    OntologyOrder, OverlapOrder, SortOrder, StrategyConfig, StrategyKind, StrategyParseError, DEFAULT_HOP_GRID,
    DEFAULT_TOP_K,
};

/// Passage ids of rechunked, filtered sentences start with this prefix.
pub const FILTERED_PREFIX: &str = "f";

#[derive(Debug, Error)]
pub enum AugmentError {
    #[error("question type {0} is answered from templates, not the reader")]
    UnsupportedType(QuestionType),
    #[error(transparent)]
    Reader(#[from] ReaderError),
    #[error(transparent)]
    Chunk(#[from] CorpusError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AnswerStatus {
    Answered,
    NoAnswer,
    FilteredAll,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnswerOutcome {
    pub question_id: String,
    pub strategy: String,
    pub scorer: String,
    pub status: AnswerStatus,
    pub candidates: Vec<AugmentedCandidate>,
    pub warnings: Vec<String>,
}

/// Everything the pipeline reads besides the question and scorer.
#[derive(Clone, Copy)]
pub struct AugmentContext<'a> {
    pub passages: &'a [Passage],
    pub knowledge: &'a KnowledgeBase,
    pub tokenizer: &'a dyn Tokenizer,
    pub max_tokens: usize,
}

/// Annotations recorded for the question id, else for its shared concept key.
pub fn question_annotations<'a>(q: &QuestionInstance, annotations: &'a AnnotationSet) -> &'a [ConceptAnnotation] {
    let own = annotations.for_question(&q.id);
    if !own.is_empty() {
        return own;
    }
    q.concept_key
        .as_deref()
        .map_or(&[][..], |key| annotations.for_question(key))
}

/// Runs the reader under `strategy` and returns at most `top_k` candidates.
pub fn answer_question(
    q: &QuestionInstance,
    strategy: &StrategyConfig,
    scorer: &dyn Scorer,
    ctx: AugmentContext<'_>,
) -> Result<AnswerOutcome, AugmentError> {
    if !q.qtype.uses_reader() {
        return Err(AugmentError::UnsupportedType(q.qtype));
    }
    let kb = ctx.knowledge;
    let q_anns = question_annotations(q, &kb.annotations);
    let mut outcome = AnswerOutcome {
        question_id: q.id.clone(),
        strategy: strategy.to_string(),
        scorer: scorer.name().to_string(),
        status: AnswerStatus::Answered,
        candidates: Vec::new(),
        warnings: Vec::new(),
    };

    let filtered = match &strategy.kind {
        StrategyKind::PreFilterSemantic { allowed_types } => {
            let f = SemanticFilter::resolve(q.qtype, allowed_types.as_ref());
            Some(prefilter_semantic(q_anns, ctx.passages, &kb.annotations, &f))
        }
        StrategyKind::PreFilterOntology { max_hops, require_noun } => Some(prefilter_ontology(
            q_anns,
            ctx.passages,
            &kb.annotations,
            &kb.graph,
            &kb.mapping,
            *max_hops,
            *require_noun,
        )),
        _ => None,
    };
    let rechunked;
    let passages = match filtered {
        None => ctx.passages,
        Some(f) => {
            if f.passed_through {
                let msg = format!("question {} has no concepts for {}; filter skipped", q.id, outcome.strategy);
                tracing::warn!("{msg}");
                outcome.warnings.push(msg);
            }
            if f.sentences.is_empty() {
                outcome.status = AnswerStatus::FilteredAll;
                return Ok(outcome);
            }
            rechunked = rechunk(f.sentences, ctx.tokenizer, ctx.max_tokens, FILTERED_PREFIX)?;
            &rechunked[..]
        }
    };

    let scored = rank_candidates(scorer, &q.text, passages, strategy.top_k)?;
    outcome.warnings.extend(scored.warnings);

    let disease = ConceptFilter::disease();
    let q_codes = concept_codes(q_anns, &disease, &kb.mapping);
    let candidates = scored
        .candidates
        .into_iter()
        .map(|c| {
            let s_anns = kb.annotations.for_sentence(&c.sentence_id);
            let a_codes = concept_codes(s_anns, &disease, &kb.mapping);
            AugmentedCandidate {
                strategy: outcome.strategy.clone(),
                overlap_count: disease_overlap(q_anns, s_anns, &disease),
                hop_sum: hop_sum(&q_codes, &a_codes, &kb.graph),
                ancestor_count: ancestor_count(&q_codes, &a_codes, &kb.graph),
                base: c,
            }
        })
        .collect();
    outcome.candidates = match strategy.kind.sort_order() {
        Some(order) => postsort(candidates, order),
        None => candidates,
    };
    if outcome.candidates.is_empty() {
        outcome.status = AnswerStatus::NoAnswer;
    }
    Ok(outcome)
}
