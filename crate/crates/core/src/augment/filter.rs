use std::collections::BTreeSet;

use crate::corpus::{Passage, PassageSentence};
use crate::ontology::{
    filter_annotations, AnnotationSet, ConceptAnnotation, ConceptFilter, ConceptMapping, OntologyGraph,
    SemanticType,
};
use crate::questions::QuestionType;

use super::features::concept_codes;

/// How a sentence annotation must relate to the question's concepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConceptMatch {
    /// Same CUI as some question concept.
    Cui,
    /// Same semantic type as some question concept.
    SemanticType,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemanticFilter {
    pub concepts: ConceptFilter,
    pub matching: ConceptMatch,
}

impl SemanticFilter {
    /// Feature questions match disease CUIs. Medication questions accept any
    /// pharmacologic substance. Lab questions match lab procedure or result CUIs.
    pub fn for_question_type(qtype: QuestionType) -> Self {
        match qtype {
            QuestionType::Medication => SemanticFilter {
                concepts: ConceptFilter::of_types(["phsu"], true),
                matching: ConceptMatch::SemanticType,
            },
            QuestionType::LabValue => SemanticFilter {
                concepts: ConceptFilter::of_types(["lbpr", "lbtr"], true),
                matching: ConceptMatch::Cui,
            },
            _ => SemanticFilter {
                concepts: ConceptFilter::disease(),
                matching: ConceptMatch::Cui,
            },
        }
    }

    /// The question-type default with `types` substituted when given.
    pub fn resolve(qtype: QuestionType, types: Option<&BTreeSet<SemanticType>>) -> Self {
        let mut f = Self::for_question_type(qtype);
        if let Some(types) = types {
            f.concepts.allowed_types = types.clone();
        }
        f
    }
}

/// Result of a pre-filter: kept passages, kept sentences in input order, and
/// whether the question lacked concepts so everything passed through.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Filtered {
    pub passages: Vec<Passage>,
    pub sentences: Vec<PassageSentence>,
    pub passed_through: bool,
}

fn keep_where(passages: &[Passage], mut keep: impl FnMut(&PassageSentence) -> bool) -> Filtered {
    let mut out = Filtered::default();
    for p in passages {
        let before = out.sentences.len();
        out.sentences.extend(p.sentences.iter().filter(|s| keep(s)).cloned());
        if out.sentences.len() > before {
            out.passages.push(p.clone());
        }
    }
    out
}

fn pass_through(passages: &[Passage]) -> Filtered {
    Filtered {
        passages: passages.to_vec(),
        sentences: passages.iter().flat_map(|p| p.sentences.iter().cloned()).collect(),
        passed_through: true,
    }
}

/// Keeps sentences carrying an accepted annotation that matches one of the
/// question's accepted concepts, and the passages holding them.
pub fn prefilter_semantic(
    question: &[ConceptAnnotation],
    passages: &[Passage],
    annotations: &AnnotationSet,
    filter: &SemanticFilter,
) -> Filtered {
    let q: Vec<&ConceptAnnotation> = filter_annotations(question, &filter.concepts).collect();
    if q.is_empty() {
        return pass_through(passages);
    }
    let cuis: BTreeSet<&str> = q.iter().map(|a| a.cui.as_str()).collect();
    let types: BTreeSet<&SemanticType> = q.iter().map(|a| &a.semantic_type).collect();
    keep_where(passages, |s| {
        filter_annotations(annotations.for_sentence(&s.id), &filter.concepts).any(|a| match filter.matching {
            ConceptMatch::Cui => cuis.contains(a.cui.as_str()),
            ConceptMatch::SemanticType => types.contains(&a.semantic_type),
        })
    })
}

/// Keeps sentences with a disease code within `max_hops` of a question code,
/// or with a code that is an ancestor of a question code. A shared code
/// counts as zero hops even when it is absent from the graph.
pub fn prefilter_ontology(
    question: &[ConceptAnnotation],
    passages: &[Passage],
    annotations: &AnnotationSet,
    graph: &OntologyGraph,
    mapping: &ConceptMapping,
    max_hops: u32,
    require_noun: bool,
) -> Filtered {
    let concepts = ConceptFilter {
        require_noun,
        ..ConceptFilter::disease()
    };
    let q_codes = concept_codes(question, &concepts, mapping);
    if q_codes.is_empty() {
        return pass_through(passages);
    }
    keep_where(passages, |s| {
        concept_codes(annotations.for_sentence(&s.id), &concepts, mapping)
            .iter()
            .any(|a| {
                q_codes.iter().any(|q| {
                    a == q
                        || graph.hop_distance(q, a).is_some_and(|d| d <= max_hops)
                        || graph.is_ancestor(a, q)
                })
            })
    })
}
