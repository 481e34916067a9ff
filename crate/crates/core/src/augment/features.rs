use std::cmp::Ordering;
use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::ontology::{filter_annotations, ConceptAnnotation, ConceptFilter, ConceptMapping, OntologyGraph};
use crate::reader::AnswerCandidate;

use super::strategy::{OntologyOrder, OverlapOrder, SortOrder};

/// A reader candidate with the knowledge features used for post-sorting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AugmentedCandidate {
    #[serde(flatten)]
    pub base: AnswerCandidate,
    pub strategy: String,
    pub overlap_count: usize,
    /// `None` when some question code reaches no answer code.
    pub hop_sum: Option<u32>,
    pub ancestor_count: usize,
}

/// Distinct accepted CUIs shared by the question and the sentence.
pub fn disease_overlap(
    question: &[ConceptAnnotation],
    sentence: &[ConceptAnnotation],
    filter: &ConceptFilter,
) -> usize {
    let q: BTreeSet<&str> = filter_annotations(question, filter).map(|a| a.cui.as_str()).collect();
    let s: BTreeSet<&str> = filter_annotations(sentence, filter).map(|a| a.cui.as_str()).collect();
    q.intersection(&s).count()
}

/// Ontology codes of the accepted annotations.
pub fn concept_codes(
    annotations: &[ConceptAnnotation],
    filter: &ConceptFilter,
    mapping: &ConceptMapping,
) -> BTreeSet<String> {
    filter_annotations(annotations, filter)
        .flat_map(|a| mapping.codes_for(&a.cui).iter().cloned())
        .collect()
}

/// For each question code, the hop distance to its nearest answer code,
/// summed over question codes.
pub fn hop_sum(
    question_codes: &BTreeSet<String>,
    answer_codes: &BTreeSet<String>,
    graph: &OntologyGraph,
) -> Option<u32> {
    if question_codes.is_empty() || answer_codes.is_empty() {
        return None;
    }
    question_codes.iter().try_fold(0u32, |acc, q| {
        let nearest = answer_codes.iter().filter_map(|a| graph.hop_distance(q, a)).min()?;
        Some(acc.saturating_add(nearest))
    })
}

/// Answer codes that are proper ancestors of at least one question code.
pub fn ancestor_count(
    question_codes: &BTreeSet<String>,
    answer_codes: &BTreeSet<String>,
    graph: &OntologyGraph,
) -> usize {
    answer_codes
        .iter()
        .filter(|a| question_codes.iter().any(|q| graph.is_ancestor(a, q)))
        .count()
}

fn confidence_desc(a: &AugmentedCandidate, b: &AugmentedCandidate) -> Ordering {
    b.base.confidence.total_cmp(&a.base.confidence)
}

fn overlap_desc(a: &AugmentedCandidate, b: &AugmentedCandidate) -> Ordering {
    b.overlap_count.cmp(&a.overlap_count)
}

fn ancestors_desc(a: &AugmentedCandidate, b: &AugmentedCandidate) -> Ordering {
    b.ancestor_count.cmp(&a.ancestor_count)
}

fn hops_asc(a: &AugmentedCandidate, b: &AugmentedCandidate) -> Ordering {
    match (a.hop_sum, b.hop_sum) {
        (Some(x), Some(y)) => x.cmp(&y),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => Ordering::Equal,
    }
}

/// Stable reorder by the key tuple of `order`.
pub fn postsort(mut candidates: Vec<AugmentedCandidate>, order: SortOrder) -> Vec<AugmentedCandidate> {
    type Key = fn(&AugmentedCandidate, &AugmentedCandidate) -> Ordering;
    let keys: &[Key] = match order {
        SortOrder::Overlap(OverlapOrder::ConfidenceFirst) => &[confidence_desc, overlap_desc],
        SortOrder::Overlap(OverlapOrder::OverlapFirst) => &[overlap_desc, confidence_desc],
        SortOrder::Ontology(OntologyOrder::HopsFirst) => &[hops_asc, ancestors_desc, confidence_desc],
        SortOrder::Ontology(OntologyOrder::AncestorsFirst) => &[ancestors_desc, hops_asc, confidence_desc],
        SortOrder::Ontology(OntologyOrder::ConfidenceFirst) => &[confidence_desc, ancestors_desc, hops_asc],
    };
    candidates.sort_by(|a, b| keys.iter().fold(Ordering::Equal, |o, k| o.then_with(|| k(a, b))));
    candidates
}
