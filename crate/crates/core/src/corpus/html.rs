//! Selector-driven extraction of a guideline HTML document.

use scraper::{ElementRef, Html, Selector};
use serde::{Deserialize, Serialize};

use super::tokenize::{normalize_whitespace, split_sentences};
use super::{
    Chapter, CorpusError, DiscussionSentence, GuidelineCorpus, Recommendation, RecommendationGroup,
    Reference,
};

/// CSS selectors naming the regions of a guideline page.
///
/// `chapter` is matched against the whole document; `chapter_title` and
/// `group` inside each chapter; the remaining selectors inside each group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtractionConfig {
    #[serde(default = "default_title")]
    pub title: String,
    pub chapter: String,
    pub chapter_title: String,
    pub group: String,
    /// Attribute holding a stable group id; positional ids are used when absent.
    #[serde(default)]
    pub group_id_attr: Option<String>,
    pub recommendation: String,
    pub discussion: String,
    pub reference: String,
}

fn default_title() -> String {
    "h1".to_string()
}

impl Default for ExtractionConfig {
    fn default() -> Self {
        ExtractionConfig {
            title: default_title(),
            chapter: "section.chapter".into(),
            chapter_title: "h2".into(),
            group: "section.recommendation-group".into(),
            group_id_attr: Some("id".into()),
            recommendation: ".recommendations li".into(),
            discussion: ".discussion p".into(),
            reference: ".references li".into(),
        }
    }
}

impl ExtractionConfig {
    pub fn from_json_str(json: &str) -> Result<Self, CorpusError> {
        Ok(serde_json::from_str(json)?)
    }
}

struct Selectors {
    title: Selector,
    chapter: Selector,
    chapter_title: Selector,
    group: Selector,
    recommendation: Selector,
    discussion: Selector,
    reference: Selector,
}

fn compile(name: &'static str, selector: &str) -> Result<Selector, CorpusError> {
    Selector::parse(selector).map_err(|e| CorpusError::InvalidSelector {
        name,
        selector: selector.to_string(),
        reason: e.to_string(),
    })
}

impl Selectors {
    fn new(cfg: &ExtractionConfig) -> Result<Self, CorpusError> {
        Ok(Selectors {
            title: compile("title", &cfg.title)?,
            chapter: compile("chapter", &cfg.chapter)?,
            chapter_title: compile("chapter_title", &cfg.chapter_title)?,
            group: compile("group", &cfg.group)?,
            recommendation: compile("recommendation", &cfg.recommendation)?,
            discussion: compile("discussion", &cfg.discussion)?,
            reference: compile("reference", &cfg.reference)?,
        })
    }
}

fn element_text(el: ElementRef<'_>) -> String {
    normalize_whitespace(&el.text().collect::<String>())
}

/// Parses guideline HTML into a validated corpus.
pub fn parse_guideline(html: &str, cfg: &ExtractionConfig) -> Result<GuidelineCorpus, CorpusError> {
    if html.trim().is_empty() {
        return Err(CorpusError::EmptyDocument);
    }
    let sel = Selectors::new(cfg)?;
    let doc = Html::parse_document(html);

    let title = doc.select(&sel.title).next().map(element_text).unwrap_or_default();

    let mut chapters = Vec::new();
    for (ci, chapter_el) in doc.select(&sel.chapter).enumerate() {
        let ordinal = ci as u32 + 1;
        let chapter_title = chapter_el
            .select(&sel.chapter_title)
            .next()
            .map(element_text)
            .filter(|t| !t.is_empty())
            .ok_or_else(|| CorpusError::MissingChapterElement {
                ordinal,
                name: "chapter_title",
                selector: cfg.chapter_title.clone(),
            })?;

        let mut groups = Vec::new();
        for (gi, group_el) in chapter_el.select(&sel.group).enumerate() {
            let id = cfg
                .group_id_attr
                .as_deref()
                .and_then(|attr| group_el.value().attr(attr))
                .map(str::trim)
                .filter(|v| !v.is_empty())
                .map(str::to_string)
                .unwrap_or_else(|| format!("c{ordinal}g{}", gi + 1));

            let recommendations = group_el
                .select(&sel.recommendation)
                .map(element_text)
                .filter(|t| !t.is_empty())
                .map(|t| Recommendation::parse(&t))
                .filter(|r| !r.text.is_empty())
                .collect();

            let discussion = group_el
                .select(&sel.discussion)
                .flat_map(|p| split_sentences(&element_text(p)))
                .enumerate()
                .map(|(i, text)| DiscussionSentence {
                    id: format!("{id}.d{}", i + 1),
                    text,
                })
                .collect();

            let references = group_el
                .select(&sel.reference)
                .map(element_text)
                .filter(|t| !t.is_empty())
                .enumerate()
                .map(|(i, t)| parse_reference(i, &t))
                .collect();

            groups.push(RecommendationGroup {
                id,
                recommendations,
                discussion,
                references,
            });
        }
        chapters.push(Chapter {
            ordinal,
            title: chapter_title,
            groups,
        });
    }

    if chapters.is_empty() {
        return Err(CorpusError::SelectorMatchedNothing {
            name: "chapter",
            selector: cfg.chapter.clone(),
        });
    }

    let corpus = GuidelineCorpus { title, chapters };
    corpus.validate()?;
    Ok(corpus)
}

/// `"12. Smith J. ..."` keeps its printed index; otherwise the position is used.
fn parse_reference(position: usize, text: &str) -> Reference {
    let digits: String = text.chars().take_while(char::is_ascii_digit).collect();
    let rest = &text[digits.len()..];
    if !digits.is_empty() && (rest.starts_with(". ") || rest.starts_with(") ")) {
        if let Ok(index) = digits.parse() {
            return Reference {
                index,
                citation: rest[2..].trim().to_string(),
            };
        }
    }
    Reference {
        index: position as u32 + 1,
        citation: text.to_string(),
    }
}
