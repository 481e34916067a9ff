use serde::{Deserialize, Serialize};

use crate::questions::{render_pairs, AnswerSource, QuestionError, TemplateAnswer};
use crate::reader::AnswerCandidate;

use super::extract::is_stopword;
use super::{extract_numeric_phrases, Interval, NumericPhrase};

/// Tokens too generic to link two noun phrases on their own.
const GENERIC: &[&str] = &["level", "levels", "value", "values", "count", "counts", "concentration", "result", "results"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RangeSemantics {
    /// Question and answer intervals overlap.
    #[default]
    Intersection,
    /// The question interval lies inside the answer interval.
    Subset,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct CompareConfig {
    pub semantics: RangeSemantics,
    pub min_shared_tokens: usize,
}

impl Default for CompareConfig {
    fn default() -> Self {
        CompareConfig {
            semantics: RangeSemantics::Intersection,
            min_shared_tokens: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchedPair {
    pub question: NumericPhrase,
    pub answer: NumericPhrase,
    pub question_interval: Interval,
    pub answer_interval: Interval,
    /// One side was compared through its bracketed alternate unit.
    pub via_alternate: bool,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RangeVerdict {
    pub in_range: bool,
    pub matched_pairs: Vec<MatchedPair>,
    pub unmatched_question_phrases: Vec<NumericPhrase>,
}

fn content_tokens(p: &NumericPhrase) -> impl Iterator<Item = &str> {
    p.noun_phrase
        .iter()
        .map(String::as_str)
        .filter(|t| !is_stopword(t) && !GENERIC.contains(t))
}

fn shared_tokens(a: &NumericPhrase, b: &NumericPhrase) -> usize {
    let b_tokens: std::collections::BTreeSet<&str> = content_tokens(b).collect();
    content_tokens(a)
        .collect::<std::collections::BTreeSet<_>>()
        .intersection(&b_tokens)
        .count()
}

fn units_compatible(a: Option<&str>, b: Option<&str>) -> bool {
    match (a, b) {
        (Some(a), Some(b)) => a.eq_ignore_ascii_case(b),
        _ => true,
    }
}

/// Intervals to compare for a phrase pair, trying primary units first and
/// then either side's alternate.
fn comparable(q: &NumericPhrase, a: &NumericPhrase) -> Option<(Interval, Interval, bool)> {
    if units_compatible(q.unit.as_deref(), a.unit.as_deref()) {
        return Some((q.interval, a.interval, false));
    }
    if let Some(alt) = &a.alternate {
        if units_compatible(q.unit.as_deref(), alt.unit.as_deref()) {
            return Some((q.interval, alt.interval, true));
        }
    }
    if let Some(alt) = &q.alternate {
        if units_compatible(alt.unit.as_deref(), a.unit.as_deref()) {
            return Some((alt.interval, a.interval, true));
        }
    }
    None
}

fn agrees(q: &Interval, a: &Interval, semantics: RangeSemantics) -> bool {
    match semantics {
        RangeSemantics::Intersection => q.intersects(a),
        RangeSemantics::Subset => q.is_subset_of(a),
    }
}

/// Pairs each question phrase with the answer phrase sharing the most
/// content tokens (earliest on ties) and checks every pair.
pub fn compare_ranges(
    question: &[NumericPhrase],
    answer: &[NumericPhrase],
    config: &CompareConfig,
) -> RangeVerdict {
    let mut matched_pairs = Vec::new();
    let mut unmatched = Vec::new();
    let min_shared = config.min_shared_tokens.max(1);
    for q in question {
        let mut best: Option<(usize, &NumericPhrase, (Interval, Interval, bool))> = None;
        for a in answer {
            let shared = shared_tokens(q, a);
            if shared < min_shared {
                continue;
            }
            let Some(c) = comparable(q, a) else { continue };
            if best.as_ref().is_none_or(|(s, _, _)| shared > *s) {
                best = Some((shared, a, c));
            }
        }
        match best {
            Some((_, a, (qi, ai, via_alternate))) => matched_pairs.push(MatchedPair {
                question: q.clone(),
                answer: a.clone(),
                question_interval: qi,
                answer_interval: ai,
                via_alternate,
                agrees: agrees(&qi, &ai, config.semantics),
            }),
            None => unmatched.push(q.clone()),
        }
    }
    RangeVerdict {
        in_range: !matched_pairs.is_empty() && matched_pairs.iter().all(|p| p.agrees),
        matched_pairs,
        unmatched_question_phrases: unmatched,
    }
}

/// Extracts phrases from both texts and compares them.
pub fn range_verdict(question: &str, answer: &str, config: &CompareConfig) -> RangeVerdict {
    let q = extract_numeric_phrases(question).phrases;
    let a = extract_numeric_phrases(answer).phrases;
    compare_ranges(&q, &a, config)
}

pub const IN_RANGE: &str = "in range";
pub const OUT_OF_RANGE: &str = "out of range";
pub const NO_COMPARABLE: &str = "no comparable numeric statement found";

pub fn verdict_clause(verdict: &RangeVerdict) -> &'static str {
    if verdict.matched_pairs.is_empty() {
        NO_COMPARABLE
    } else if verdict.in_range {
        IN_RANGE
    } else {
        OUT_OF_RANGE
    }
}

/// Guideline sentence followed by the range clause.
pub fn verdict_answer(
    verdict: &RangeVerdict,
    candidate: &AnswerCandidate,
) -> Result<TemplateAnswer, QuestionError> {
    let text = render_pairs(
        "${sentence} [Patient lab value: ${clause}]",
        &[
            ("sentence", candidate.answer_text.clone()),
            ("clause", verdict_clause(verdict).to_string()),
        ],
    )?;
    Ok(TemplateAnswer {
        text,
        sources: vec![AnswerSource::Guideline, AnswerSource::PatientData],
    })
}
