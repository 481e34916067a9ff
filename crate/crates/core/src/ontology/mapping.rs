use std::collections::HashMap;
use std::path::Path;

use serde::Deserialize;

use super::{jsonl_lines, read_file, KnowledgeError};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMapping {
    cui: String,
    codes: Vec<String>,
}

/// CUI to ontology concept codes. Repeated CUIs are merged.
#[derive(Debug, Clone, Default)]
pub struct ConceptMapping {
    cui_to_codes: HashMap<String, Vec<String>>,
}

impl ConceptMapping {
    pub fn parse_jsonl(text: &str, file: &str) -> Result<Self, KnowledgeError> {
        let mut map: HashMap<String, Vec<String>> = HashMap::new();
        for (line, raw) in jsonl_lines(text) {
            let rec: RawMapping = serde_json::from_str(raw).map_err(|e| KnowledgeError::Malformed {
                file: file.to_string(),
                line,
                reason: e.to_string(),
            })?;
            let codes = map.entry(rec.cui).or_default();
            for code in rec.codes {
                if !codes.contains(&code) {
                    codes.push(code);
                }
            }
        }
        Ok(ConceptMapping { cui_to_codes: map })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, KnowledgeError> {
        let path = path.as_ref();
        Self::parse_jsonl(&read_file(path)?, &path.display().to_string())
    }

    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, &'a [&'a str])>) -> Self {
        let cui_to_codes = pairs
            .into_iter()
            .map(|(cui, codes)| (cui.to_string(), codes.iter().map(|c| c.to_string()).collect()))
            .collect();
        ConceptMapping { cui_to_codes }
    }

    /// Mapped codes; empty for an unmapped CUI.
    pub fn codes_for(&self, cui: &str) -> &[String] {
        self.cui_to_codes.get(cui).map_or(&[], Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.cui_to_codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cui_to_codes.is_empty()
    }
}
