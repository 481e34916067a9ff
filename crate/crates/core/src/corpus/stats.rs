//! Coverage statistics over an extracted corpus.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{GuidelineCorpus, Tokenizer};
use crate::ontology::AnnotationSet;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageStats {
    pub tokenizer: String,
    pub chapter_count: usize,
    pub sentence_count: usize,
    pub token_count: usize,
    /// `token_count / sentence_count`, truncated; 0 for an empty corpus.
    pub avg_tokens_per_sentence: usize,
    /// Distinct semantic types annotated on corpus sentences. `None` without annotations.
    pub distinct_semantic_types: Option<usize>,
    /// Size of the semantic-type catalog the annotations were validated against.
    pub semantic_type_catalog: Option<usize>,
}

pub fn corpus_stats(
    corpus: &GuidelineCorpus,
    tokenizer: &dyn Tokenizer,
    annotations: Option<&AnnotationSet>,
) -> CoverageStats {
    let sentences = corpus.sentences();
    let token_count: usize = sentences.iter().map(|s| tokenizer.count(&s.text)).sum();
    let sentence_count = sentences.len();
    let avg = if sentence_count == 0 { 0 } else { token_count / sentence_count };

    let (distinct, catalog) = match annotations {
        Some(set) => {
            let types: BTreeSet<&str> = sentences
                .iter()
                .flat_map(|s| set.for_sentence(&s.id))
                .map(|a| a.semantic_type.as_str())
                .collect();
            (Some(types.len()), Some(set.catalog_size()))
        }
        None => (None, None),
    };

    CoverageStats {
        tokenizer: tokenizer.name().to_string(),
        chapter_count: corpus.chapters.len(),
        sentence_count,
        token_count,
        avg_tokens_per_sentence: avg,
        distinct_semantic_types: distinct,
        semantic_type_catalog: catalog,
    }
}
