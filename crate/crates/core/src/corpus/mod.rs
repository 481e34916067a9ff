//! Structured guideline corpus: chapters, recommendation groups, graded
//! recommendations, discussion sentences and references.

mod chunk;
mod html;
mod stats;
mod tokenize;

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use chunk::{chunk_passages, chunk_sentences, rechunk, Passage, PassageSentence};
pub use html::{parse_guideline, ExtractionConfig};
pub use stats::{corpus_stats, CoverageStats};
pub use tokenize::{normalize_whitespace, split_sentences, Tokenizer, WordTokenizer};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("empty guideline document")]
    EmptyDocument,
    #[error("selector `{name}` = {selector:?} is invalid: {reason}")]
    InvalidSelector {
        name: &'static str,
        selector: String,
        reason: String,
    },
    #[error("selector `{name}` = {selector:?} matched no elements")]
    SelectorMatchedNothing { name: &'static str, selector: String },
    #[error("chapter {ordinal}: selector `{name}` = {selector:?} matched no element")]
    MissingChapterElement {
        ordinal: u32,
        name: &'static str,
        selector: String,
    },
    #[error("invalid corpus: {0}")]
    Invalid(String),
    #[error("max_tokens must be positive")]
    ZeroMaxTokens,
    #[error("corpus json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Evidence grade attached to a recommendation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Grade {
    A,
    B,
    C,
    E,
    Unknown,
}

impl Grade {
    fn from_letter(letter: &str) -> Option<Grade> {
        match letter {
            "A" => Some(Grade::A),
            "B" => Some(Grade::B),
            "C" => Some(Grade::C),
            "E" => Some(Grade::E),
            _ => None,
        }
    }
}

impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Grade::A => "A",
            Grade::B => "B",
            Grade::C => "C",
            Grade::E => "E",
            Grade::Unknown => "Unknown",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GuidelineCorpus {
    pub title: String,
    pub chapters: Vec<Chapter>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Chapter {
    pub ordinal: u32,
    pub title: String,
    pub groups: Vec<RecommendationGroup>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecommendationGroup {
    pub id: String,
    pub recommendations: Vec<Recommendation>,
    pub discussion: Vec<DiscussionSentence>,
    pub references: Vec<Reference>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Recommendation {
    pub numbering: String,
    pub text: String,
    pub grade: Grade,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscussionSentence {
    pub id: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reference {
    pub index: u32,
    pub citation: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SentenceKind {
    Recommendation,
    Discussion,
}

/// Flattened view of one recommendation or discussion sentence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sentence {
    pub id: String,
    pub text: String,
    pub kind: SentenceKind,
    pub chapter_ordinal: u32,
    pub group_id: String,
    /// Recommendation numbering such as `10.3`; `None` for discussion.
    pub numbering: Option<String>,
    pub grade: Option<Grade>,
}

impl Recommendation {
    /// Parses `"10.3 For patients ... preferences. C"` into numbering, text and grade.
    ///
    /// A leading dotted number becomes the numbering and a trailing standalone
    /// `A`, `B`, `C` or `E` becomes the grade. Anything else is left in the text
    /// and the grade is `Unknown`.
    pub fn parse(raw: &str) -> Recommendation {
        let normalized = normalize_whitespace(raw);
        let mut words: Vec<&str> = normalized.split(' ').filter(|w| !w.is_empty()).collect();

        let numbering = match words.first() {
            Some(first) if words.len() > 1 && is_numbering(first) => {
                let n = first.trim_end_matches('.').to_string();
                words.remove(0);
                n
            }
            _ => String::new(),
        };

        let grade = match words.last().and_then(|w| Grade::from_letter(w)) {
            Some(g) if words.len() > 1 => {
                words.pop();
                g
            }
            _ => Grade::Unknown,
        };

        Recommendation {
            numbering,
            text: words.join(" "),
            grade,
        }
    }
}

fn is_numbering(word: &str) -> bool {
    let w = word.trim_end_matches('.');
    let mut parts = w.split('.');
    let Some(head) = parts.next() else { return false };
    if head.is_empty() || !head.chars().all(|c| c.is_ascii_digit()) {
        return false;
    }
    parts.all(|p| {
        let digits: String = p.chars().take_while(char::is_ascii_digit).collect();
        let rest = &p[digits.len()..];
        !digits.is_empty() && rest.len() <= 1 && rest.chars().all(|c| c.is_ascii_lowercase())
    })
}

/// Sentence id for the `index`-th (0-based) recommendation in a group.
pub fn recommendation_sentence_id(group_id: &str, index: usize) -> String {
    format!("{group_id}.r{}", index + 1)
}

impl GuidelineCorpus {
    pub fn from_json_str(json: &str) -> Result<Self, CorpusError> {
        let corpus: GuidelineCorpus = serde_json::from_str(json)?;
        corpus.validate()?;
        Ok(corpus)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, CorpusError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| CorpusError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json_str(&text)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("corpus serializes")
    }

    pub fn validate(&self) -> Result<(), CorpusError> {
        let mut seen = HashSet::new();
        for (i, chapter) in self.chapters.iter().enumerate() {
            let expected = i as u32 + 1;
            if chapter.ordinal != expected {
                return Err(CorpusError::Invalid(format!(
                    "chapter ordinals must be contiguous from 1: found {} at position {expected}",
                    chapter.ordinal
                )));
            }
            if chapter.title.trim().is_empty() {
                return Err(CorpusError::Invalid(format!("chapter {expected} has an empty title")));
            }
        }
        for sentence in self.sentences() {
            if sentence.text.trim().is_empty() && sentence.kind == SentenceKind::Recommendation {
                return Err(CorpusError::Invalid(format!(
                    "recommendation {} has empty text",
                    sentence.id
                )));
            }
            if !seen.insert(sentence.id.clone()) {
                return Err(CorpusError::Invalid(format!("duplicate sentence id {}", sentence.id)));
            }
        }
        Ok(())
    }

    /// All recommendation and discussion sentences in document order.
    /// Within a group, recommendations precede discussion.
    pub fn sentences(&self) -> Vec<Sentence> {
        let mut out = Vec::new();
        for chapter in &self.chapters {
            for group in &chapter.groups {
                for (i, rec) in group.recommendations.iter().enumerate() {
                    out.push(Sentence {
                        id: recommendation_sentence_id(&group.id, i),
                        text: rec.text.clone(),
                        kind: SentenceKind::Recommendation,
                        chapter_ordinal: chapter.ordinal,
                        group_id: group.id.clone(),
                        numbering: Some(rec.numbering.clone()),
                        grade: Some(rec.grade),
                    });
                }
                for d in &group.discussion {
                    out.push(Sentence {
                        id: d.id.clone(),
                        text: d.text.clone(),
                        kind: SentenceKind::Discussion,
                        chapter_ordinal: chapter.ordinal,
                        group_id: group.id.clone(),
                        numbering: None,
                        grade: None,
                    });
                }
            }
        }
        out
    }

    pub fn group_count(&self) -> usize {
        self.chapters.iter().map(|c| c.groups.len()).sum()
    }

    pub fn recommendation_count(&self) -> usize {
        self.chapters
            .iter()
            .flat_map(|c| &c.groups)
            .map(|g| g.recommendations.len())
            .sum()
    }

    pub fn discussion_count(&self) -> usize {
        self.chapters
            .iter()
            .flat_map(|c| &c.groups)
            .map(|g| g.discussion.len())
            .sum()
    }
}

/// Id lookup over a corpus' sentences, preserving document order.
#[derive(Debug, Clone, Default)]
pub struct CorpusIndex {
    sentences: Vec<Sentence>,
    by_id: HashMap<String, usize>,
}

impl CorpusIndex {
    pub fn new(corpus: &GuidelineCorpus) -> Self {
        let sentences = corpus.sentences();
        let by_id = sentences
            .iter()
            .enumerate()
            .map(|(i, s)| (s.id.clone(), i))
            .collect();
        CorpusIndex { sentences, by_id }
    }

    pub fn get(&self, id: &str) -> Option<&Sentence> {
        self.by_id.get(id).map(|&i| &self.sentences[i])
    }

    /// Document position of a sentence id.
    pub fn position(&self, id: &str) -> Option<usize> {
        self.by_id.get(id).copied()
    }

    pub fn sentences(&self) -> &[Sentence] {
        &self.sentences
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }
}
