use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{jsonl_lines, read_file, KnowledgeError, SemanticType, SemanticTypeRegistry};

/// One recognized concept mention.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConceptAnnotation {
    pub surface: String,
    pub start: usize,
    pub end: usize,
    pub cui: String,
    pub semantic_type: SemanticType,
    pub is_noun: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAnnotation {
    #[serde(default)]
    sentence_id: Option<String>,
    #[serde(default)]
    question_id: Option<String>,
    surface: String,
    start: usize,
    end: usize,
    cui: String,
    semantic_type: String,
    is_noun: bool,
}

/// Concept annotations keyed by sentence id and by question id.
#[derive(Debug, Clone, Default)]
pub struct AnnotationSet {
    by_sentence: HashMap<String, Vec<ConceptAnnotation>>,
    by_question: HashMap<String, Vec<ConceptAnnotation>>,
    catalog_size: usize,
}

impl AnnotationSet {
    pub fn parse_jsonl(
        text: &str,
        file: &str,
        registry: &SemanticTypeRegistry,
    ) -> Result<Self, KnowledgeError> {
        let mut set = AnnotationSet {
            catalog_size: registry.len(),
            ..AnnotationSet::default()
        };
        for (line, raw) in jsonl_lines(text) {
            let malformed = |reason: String| KnowledgeError::Malformed {
                file: file.to_string(),
                line,
                reason,
            };
            let rec: RawAnnotation =
                serde_json::from_str(raw).map_err(|e| malformed(e.to_string()))?;
            if rec.end < rec.start {
                return Err(malformed(format!("end {} before start {}", rec.end, rec.start)));
            }
            if rec.cui.trim().is_empty() {
                return Err(malformed("empty cui".into()));
            }
            let semantic_type = registry.resolve(&rec.semantic_type).ok_or_else(|| {
                KnowledgeError::UnknownSemanticType {
                    file: file.to_string(),
                    line,
                    code: rec.semantic_type.clone(),
                }
            })?;
            let annotation = ConceptAnnotation {
                surface: rec.surface,
                start: rec.start,
                end: rec.end,
                cui: rec.cui,
                semantic_type,
                is_noun: rec.is_noun,
            };
            match (rec.sentence_id, rec.question_id) {
                (Some(id), None) => set.by_sentence.entry(id).or_default().push(annotation),
                (None, Some(id)) => set.by_question.entry(id).or_default().push(annotation),
                _ => {
                    return Err(malformed(
                        "exactly one of sentence_id or question_id is required".into(),
                    ))
                }
            }
        }
        Ok(set)
    }

    pub fn load(path: impl AsRef<Path>, registry: &SemanticTypeRegistry) -> Result<Self, KnowledgeError> {
        let path = path.as_ref();
        Self::parse_jsonl(&read_file(path)?, &path.display().to_string(), registry)
    }

    pub fn for_sentence(&self, sentence_id: &str) -> &[ConceptAnnotation] {
        self.by_sentence.get(sentence_id).map_or(&[], Vec::as_slice)
    }

    pub fn for_question(&self, question_id: &str) -> &[ConceptAnnotation] {
        self.by_question.get(question_id).map_or(&[], Vec::as_slice)
    }

    pub fn sentence_count(&self) -> usize {
        self.by_sentence.len()
    }

    pub fn question_count(&self) -> usize {
        self.by_question.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_sentence.is_empty() && self.by_question.is_empty()
    }

    /// Size of the semantic-type catalog used during loading.
    pub fn catalog_size(&self) -> usize {
        self.catalog_size
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reg() -> SemanticTypeRegistry {
        SemanticTypeRegistry::bundled()
    }

    #[test]
    fn empty_file_gives_empty_maps() {
        let set = AnnotationSet::parse_jsonl("", "a.jsonl", &reg()).unwrap();
        assert!(set.is_empty());
        assert!(set.for_sentence("anything").is_empty());
        assert!(set.for_question("q").is_empty());
    }

    #[test]
    fn routes_by_owner_id() {
        let text = r#"
{"sentence_id":"s1","surface":"hypertension","start":0,"end":12,"cui":"C0020538","semantic_type":"dsyn","is_noun":true}
{"question_id":"q1","surface":"asthma","start":3,"end":9,"cui":"C0004096","semantic_type":"dsyn","is_noun":true}
"#;
        let set = AnnotationSet::parse_jsonl(text, "a.jsonl", &reg()).unwrap();
        assert_eq!(set.for_sentence("s1")[0].cui, "C0020538");
        assert_eq!(set.for_question("q1")[0].surface, "asthma");
    }

    #[test]
    fn unknown_semantic_type_reports_line() {
        let text = "\n{\"sentence_id\":\"s\",\"surface\":\"x\",\"start\":0,\"end\":1,\"cui\":\"C1\",\"semantic_type\":\"zzzz\",\"is_noun\":true}";
        let err = AnnotationSet::parse_jsonl(text, "a.jsonl", &reg()).unwrap_err();
        match err {
            KnowledgeError::UnknownSemanticType { line, code, .. } => {
                assert_eq!(line, 2);
                assert_eq!(code, "zzzz");
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let err = AnnotationSet::parse_jsonl("{}\n", "a.jsonl", &reg()).unwrap_err();
        assert!(matches!(err, KnowledgeError::Malformed { line: 1, .. }));
        let both = r#"{"sentence_id":"s","question_id":"q","surface":"x","start":0,"end":1,"cui":"C1","semantic_type":"dsyn","is_noun":true}"#;
        assert!(AnnotationSet::parse_jsonl(both, "a", &reg()).is_err());
    }
}
