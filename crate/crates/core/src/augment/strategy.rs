use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::ontology::SemanticType;

pub const DEFAULT_TOP_K: usize = 10;

/// Hop limits worth sweeping in evaluation.
pub const DEFAULT_HOP_GRID: [u32; 4] = [3, 5, 6, 8];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OverlapOrder {
    /// Confidence first, disease overlap as tie-break.
    #[serde(rename = "2a")]
    ConfidenceFirst,
    /// Disease overlap first, confidence as tie-break.
    #[serde(rename = "2b")]
    OverlapFirst,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OntologyOrder {
    /// hop sum, then ancestors, then confidence.
    #[serde(rename = "5a")]
    HopsFirst,
    /// ancestors, then hop sum, then confidence.
    #[serde(rename = "5b")]
    AncestorsFirst,
    /// confidence, then ancestors, then hop sum.
    #[serde(rename = "5c")]
    ConfidenceFirst,
}

/// Sort keys for [`super::postsort`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SortOrder {
    Overlap(OverlapOrder),
    Ontology(OntologyOrder),
}

impl SortOrder {
    pub fn code(self) -> &'static str {
        match self {
            SortOrder::Overlap(OverlapOrder::ConfidenceFirst) => "2a",
            SortOrder::Overlap(OverlapOrder::OverlapFirst) => "2b",
            SortOrder::Ontology(OntologyOrder::HopsFirst) => "5a",
            SortOrder::Ontology(OntologyOrder::AncestorsFirst) => "5b",
            SortOrder::Ontology(OntologyOrder::ConfidenceFirst) => "5c",
        }
    }

    fn from_code(code: &str) -> Option<Self> {
        Some(match code {
            "2a" => SortOrder::Overlap(OverlapOrder::ConfidenceFirst),
            "2b" => SortOrder::Overlap(OverlapOrder::OverlapFirst),
            "5a" => SortOrder::Ontology(OntologyOrder::HopsFirst),
            "5b" => SortOrder::Ontology(OntologyOrder::AncestorsFirst),
            "5c" => SortOrder::Ontology(OntologyOrder::ConfidenceFirst),
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StrategyKind {
    Base,
    PostSortOverlap {
        order: OverlapOrder,
    },
    /// `allowed_types = None` picks the defaults for the question type.
    PreFilterSemantic {
        #[serde(default)]
        allowed_types: Option<BTreeSet<SemanticType>>,
    },
    PreFilterOntology {
        max_hops: u32,
        #[serde(default = "yes")]
        require_noun: bool,
    },
    PostSortOntology {
        order: OntologyOrder,
    },
}

fn yes() -> bool {
    true
}

impl StrategyKind {
    pub fn is_prefilter(&self) -> bool {
        matches!(
            self,
            StrategyKind::PreFilterSemantic { .. } | StrategyKind::PreFilterOntology { .. }
        )
    }

    pub fn sort_order(&self) -> Option<SortOrder> {
        match self {
            StrategyKind::PostSortOverlap { order } => Some(SortOrder::Overlap(*order)),
            StrategyKind::PostSortOntology { order } => Some(SortOrder::Ontology(*order)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StrategyConfig {
    pub kind: StrategyKind,
    #[serde(default = "default_top_k")]
    pub top_k: usize,
}

fn default_top_k() -> usize {
    DEFAULT_TOP_K
}

impl StrategyConfig {
    pub fn new(kind: StrategyKind) -> Self {
        StrategyConfig { kind, top_k: DEFAULT_TOP_K }
    }

    pub fn base() -> Self {
        Self::new(StrategyKind::Base)
    }

    pub fn with_top_k(mut self, top_k: usize) -> Self {
        self.top_k = top_k;
        self
    }
}

impl Default for StrategyConfig {
    fn default() -> Self {
        Self::base()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid strategy {input:?}: {reason}")]
pub struct StrategyParseError {
    pub input: String,
    pub reason: String,
}

impl FromStr for StrategyConfig {
    type Err = StrategyParseError;

    /// `base`, `overlap:2a|2b`, `semantic[:type,...]`, `hops:<n>[:any]` or
    /// `ontosort:5a|5b|5c`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| StrategyParseError {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let s = s.trim();
        let (head, rest) = match s.split_once(':') {
            Some((h, r)) => (h, Some(r)),
            None => (s, None),
        };
        let kind = match (head, rest) {
            ("base", None) => StrategyKind::Base,
            ("overlap", Some(code)) => match SortOrder::from_code(code) {
                Some(SortOrder::Overlap(order)) => StrategyKind::PostSortOverlap { order },
                _ => return Err(err("overlap order must be 2a or 2b")),
            },
            ("ontosort", Some(code)) => match SortOrder::from_code(code) {
                Some(SortOrder::Ontology(order)) => StrategyKind::PostSortOntology { order },
                _ => return Err(err("ontology order must be 5a, 5b or 5c")),
            },
            ("semantic", None) => StrategyKind::PreFilterSemantic { allowed_types: None },
            ("semantic", Some(list)) => {
                let mut types = BTreeSet::new();
                for t in list.split(',').map(str::trim) {
                    if t.len() != 4 || !t.bytes().all(|b| b.is_ascii_lowercase()) {
                        return Err(err("semantic types are four lowercase letters"));
                    }
                    types.insert(SemanticType::new_unchecked(t));
                }
                StrategyKind::PreFilterSemantic { allowed_types: Some(types) }
            }
            ("hops", Some(spec)) => {
                let (n, require_noun) = match spec.split_once(':') {
                    Some((n, "any")) => (n, false),
                    Some(_) => return Err(err("hops suffix must be :any")),
                    None => (spec, true),
                };
                let max_hops = n
                    .parse::<u32>()
                    .map_err(|_| err("max hops must be a nonnegative integer"))?;
                StrategyKind::PreFilterOntology { max_hops, require_noun }
            }
            _ => return Err(err("expected base, overlap:, semantic, hops: or ontosort:")),
        };
        Ok(StrategyConfig::new(kind))
    }
}

impl fmt::Display for StrategyConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            StrategyKind::Base => write!(f, "base"),
            StrategyKind::PostSortOverlap { order } => {
                write!(f, "overlap:{}", SortOrder::Overlap(*order).code())
            }
            StrategyKind::PostSortOntology { order } => {
                write!(f, "ontosort:{}", SortOrder::Ontology(*order).code())
            }
            StrategyKind::PreFilterSemantic { allowed_types: None } => write!(f, "semantic"),
            StrategyKind::PreFilterSemantic { allowed_types: Some(types) } => {
                let list: Vec<&str> = types.iter().map(SemanticType::as_str).collect();
                write!(f, "semantic:{}", list.join(","))
            }
            StrategyKind::PreFilterOntology { max_hops, require_noun: true } => {
                write!(f, "hops:{max_hops}")
            }
            StrategyKind::PreFilterOntology { max_hops, require_noun: false } => {
                write!(f, "hops:{max_hops}:any")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_documented_form() {
        for s in [
            "base",
            "overlap:2a",
            "overlap:2b",
            "semantic",
            "semantic:dsyn,phsu",
            "hops:3",
            "hops:0:any",
            "ontosort:5a",
            "ontosort:5b",
            "ontosort:5c",
        ] {
            let cfg: StrategyConfig = s.parse().unwrap();
            assert_eq!(cfg.to_string(), s);
            assert_eq!(cfg.top_k, DEFAULT_TOP_K);
        }
    }

    #[test]
    fn rejects_bad_forms() {
        for s in ["", "overlap:5a", "ontosort:2a", "hops:-1", "hops:x", "semantic:DSYN", "base:1", "hops"] {
            assert!(s.parse::<StrategyConfig>().is_err(), "{s}");
        }
    }

    #[test]
    fn serde_shape() {
        let cfg: StrategyConfig = "hops:5".parse().unwrap();
        let json = serde_json::to_value(&cfg).unwrap();
        assert_eq!(
            json,
            serde_json::json!({"kind": {"kind": "pre_filter_ontology", "max_hops": 5, "require_noun": true}, "top_k": 10})
        );
        let back: StrategyConfig = serde_json::from_value(json).unwrap();
        assert_eq!(back, cfg);
    }
}
