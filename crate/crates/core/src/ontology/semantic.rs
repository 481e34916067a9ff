use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::KnowledgeError;

const BUNDLED: &str = include_str!("../../data/semantic_types.tsv");

/// Four-letter semantic type abbreviation such as `dsyn` or `phsu`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SemanticType(String);

impl SemanticType {
    /// Builds a type without catalog validation. Loaders go through
    /// [`SemanticTypeRegistry::resolve`] instead.
    pub fn new_unchecked(code: impl Into<String>) -> Self {
        SemanticType(code.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for SemanticType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Closed catalog of semantic types, one `abbr<TAB>name` per line.
#[derive(Debug, Clone)]
pub struct SemanticTypeRegistry {
    names: BTreeMap<String, String>,
}

impl SemanticTypeRegistry {
    pub fn bundled() -> Self {
        Self::parse(BUNDLED, "bundled semantic types").expect("bundled catalog is well formed")
    }

    pub fn parse(text: &str, file: &str) -> Result<Self, KnowledgeError> {
        let mut names = BTreeMap::new();
        for (line, raw) in super::jsonl_lines(text) {
            let (abbr, name) = raw.split_once('\t').unwrap_or((raw, ""));
            let abbr = abbr.trim();
            if abbr.len() != 4 || !abbr.chars().all(|c| c.is_ascii_lowercase()) {
                return Err(KnowledgeError::Malformed {
                    file: file.to_string(),
                    line,
                    reason: format!("semantic type {abbr:?} is not a 4-letter lowercase code"),
                });
            }
            names.insert(abbr.to_string(), name.trim().to_string());
        }
        Ok(SemanticTypeRegistry { names })
    }

    pub fn load(path: impl AsRef<std::path::Path>) -> Result<Self, KnowledgeError> {
        let path = path.as_ref();
        Self::parse(&super::read_file(path)?, &path.display().to_string())
    }

    pub fn resolve(&self, code: &str) -> Option<SemanticType> {
        self.names.contains_key(code).then(|| SemanticType(code.to_string()))
    }

    pub fn name(&self, code: &str) -> Option<&str> {
        self.names.get(code).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

impl Default for SemanticTypeRegistry {
    fn default() -> Self {
        Self::bundled()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_catalog_has_the_core_types() {
        let reg = SemanticTypeRegistry::bundled();
        for code in ["dsyn", "fndg", "phsu", "bpoc", "lbpr"] {
            assert!(reg.resolve(code).is_some(), "{code}");
        }
        assert!(reg.resolve("zzzz").is_none());
        assert_eq!(reg.name("dsyn"), Some("Disease or Syndrome"));
    }

    #[test]
    fn rejects_malformed_codes() {
        assert!(SemanticTypeRegistry::parse("DSYN\tDisease", "t").is_err());
        assert!(SemanticTypeRegistry::parse("abc\tShort", "t").is_err());
    }
}
