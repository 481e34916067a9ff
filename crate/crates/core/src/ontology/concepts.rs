use std::collections::{BTreeMap, BTreeSet};

use super::{ConceptAnnotation, ConceptMapping, SemanticType};

/// Which annotations count as concepts for matching.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConceptFilter {
    pub allowed_types: BTreeSet<SemanticType>,
    pub require_noun: bool,
}

impl ConceptFilter {
    /// Diseases, findings and body parts, nouns only.
    pub fn disease() -> Self {
        Self::of_types(["dsyn", "fndg", "bpoc"], true)
    }

    pub fn of_types<'a>(types: impl IntoIterator<Item = &'a str>, require_noun: bool) -> Self {
        ConceptFilter {
            allowed_types: types.into_iter().map(SemanticType::new_unchecked).collect(),
            require_noun,
        }
    }

    pub fn accepts(&self, a: &ConceptAnnotation) -> bool {
        (!self.require_noun || a.is_noun) && self.allowed_types.contains(&a.semantic_type)
    }
}

impl Default for ConceptFilter {
    fn default() -> Self {
        Self::disease()
    }
}

pub fn filter_annotations<'a>(
    annotations: &'a [ConceptAnnotation],
    filter: &'a ConceptFilter,
) -> impl Iterator<Item = &'a ConceptAnnotation> + 'a {
    annotations.iter().filter(move |a| filter.accepts(a))
}

/// Distinct accepted CUIs with their mapped ontology codes. CUIs without a
/// mapping are kept with an empty code list.
pub fn disease_concepts(
    annotations: &[ConceptAnnotation],
    filter: &ConceptFilter,
    mapping: &ConceptMapping,
) -> BTreeMap<String, Vec<String>> {
    filter_annotations(annotations, filter)
        .map(|a| (a.cui.clone(), mapping.codes_for(&a.cui).to_vec()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ann(cui: &str, ty: &str, noun: bool) -> ConceptAnnotation {
        ConceptAnnotation {
            surface: cui.to_lowercase(),
            start: 0,
            end: 1,
            cui: cui.into(),
            semantic_type: SemanticType::new_unchecked(ty),
            is_noun: noun,
        }
    }

    #[test]
    fn default_filter_keeps_disease_nouns() {
        let anns = [
            ann("C1", "dsyn", true),
            ann("C2", "dsyn", false),
            ann("C3", "phsu", true),
            ann("C4", "bpoc", true),
            ann("C1", "dsyn", true),
        ];
        let mapping = ConceptMapping::from_pairs([("C1", &["10"][..])]);
        let got = disease_concepts(&anns, &ConceptFilter::default(), &mapping);
        assert_eq!(got.keys().collect::<Vec<_>>(), ["C1", "C4"]);
        assert_eq!(got["C1"], ["10"]);
        assert!(got["C4"].is_empty());
    }
}
