//! Concept annotations, the disease ontology graph and CUI-to-code mapping.
//!
//! All three structures are built once from JSON-lines files and are
//! read-only afterwards.

mod annotations;
mod concepts;
mod graph;
mod mapping;
mod semantic;

use std::path::Path;

use thiserror::Error;

pub use annotations::{AnnotationSet, ConceptAnnotation};
pub use concepts::{disease_concepts, filter_annotations, ConceptFilter};
pub use graph::OntologyGraph;
pub use mapping::ConceptMapping;
pub use semantic::{SemanticType, SemanticTypeRegistry};

#[derive(Debug, Error)]
pub enum KnowledgeError {
    #[error("{file} line {line}: {reason}")]
    Malformed {
        file: String,
        line: usize,
        reason: String,
    },
    #[error("{file} line {line}: unknown semantic type {code:?}")]
    UnknownSemanticType {
        file: String,
        line: usize,
        code: String,
    },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub(crate) fn read_file(path: &Path) -> Result<String, KnowledgeError> {
    std::fs::read_to_string(path).map_err(|source| KnowledgeError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Non-empty, non-comment lines with 1-based line numbers.
pub(crate) fn jsonl_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Annotations, graph and mapping loaded together.
#[derive(Debug, Clone, Default)]
pub struct KnowledgeBase {
    pub annotations: AnnotationSet,
    pub graph: OntologyGraph,
    pub mapping: ConceptMapping,
}

/// Loads the three knowledge files, validating semantic types against `registry`.
pub fn load_knowledge(
    annotation_file: impl AsRef<Path>,
    graph_file: impl AsRef<Path>,
    mapping_file: impl AsRef<Path>,
    registry: &SemanticTypeRegistry,
) -> Result<KnowledgeBase, KnowledgeError> {
    Ok(KnowledgeBase {
        annotations: AnnotationSet::load(annotation_file, registry)?,
        graph: OntologyGraph::load(graph_file)?,
        mapping: ConceptMapping::load(mapping_file)?,
    })
}
