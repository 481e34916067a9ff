use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{numeric_accuracy, range_verdict, AccuracyReport, Comparator, CompareConfig, NumericError};

fn yes() -> bool {
    true
}

/// One labelled (question, candidate sentence) pair for range evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeGold {
    pub question_id: String,
    pub candidate_sentence_id: String,
    pub gold_in_range: bool,
    pub operator: Comparator,
    /// False for items whose wording falls outside the comparator grammar.
    #[serde(default = "yes")]
    pub grammar_parseable: bool,
}

pub fn parse_range_gold_str(text: &str) -> Result<Vec<RangeGold>, NumericError> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let item: RangeGold = serde_json::from_str(line).map_err(|e| NumericError::Gold {
            line: i + 1,
            reason: e.to_string(),
        })?;
        if !seen.insert((item.question_id.clone(), item.candidate_sentence_id.clone())) {
            return Err(NumericError::Gold {
                line: i + 1,
                reason: format!(
                    "duplicate pair ({}, {})",
                    item.question_id, item.candidate_sentence_id
                ),
            });
        }
        out.push(item);
    }
    Ok(out)
}

pub fn load_range_gold(path: impl AsRef<Path>) -> Result<Vec<RangeGold>, NumericError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| NumericError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_range_gold_str(&text)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RangeItemResult {
    pub question_id: String,
    pub candidate_sentence_id: String,
    pub operator: Comparator,
    pub predicted_in_range: bool,
    pub gold_in_range: bool,
    pub grammar_parseable: bool,
    pub matched_pairs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RangeEvaluation {
    pub report: AccuracyReport,
    pub parseable_report: AccuracyReport,
    pub items: Vec<RangeItemResult>,
}

/// Runs the range comparison for every gold item. Text lookups resolve
/// question and sentence ids; an unresolved id is an error.
pub fn evaluate_range_gold(
    gold: &[RangeGold],
    question_text: impl Fn(&str) -> Option<String>,
    sentence_text: impl Fn(&str) -> Option<String>,
    config: &CompareConfig,
) -> Result<RangeEvaluation, NumericError> {
    let mut items = Vec::with_capacity(gold.len());
    for g in gold {
        let q = question_text(&g.question_id)
            .ok_or_else(|| NumericError::UnknownQuestion(g.question_id.clone()))?;
        let s = sentence_text(&g.candidate_sentence_id)
            .ok_or_else(|| NumericError::UnknownSentence(g.candidate_sentence_id.clone()))?;
        let verdict = range_verdict(&q, &s, config);
        items.push(RangeItemResult {
            question_id: g.question_id.clone(),
            candidate_sentence_id: g.candidate_sentence_id.clone(),
            operator: g.operator,
            predicted_in_range: verdict.in_range,
            gold_in_range: g.gold_in_range,
            grammar_parseable: g.grammar_parseable,
            matched_pairs: verdict.matched_pairs.len(),
        });
    }
    let report = numeric_accuracy(items.iter().map(|r| (r.operator, r.predicted_in_range, r.gold_in_range)));
    let parseable_report = numeric_accuracy(
        items
            .iter()
            .filter(|r| r.grammar_parseable)
            .map(|r| (r.operator, r.predicted_in_range, r.gold_in_range)),
    );
    Ok(RangeEvaluation {
        report,
        parseable_report,
        items,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_default_flag() {
        let g = parse_range_gold_str(
            r#"{"question_id":"q","candidate_sentence_id":"s","gold_in_range":true,"operator":"gt"}"#,
        )
        .unwrap();
        assert!(g[0].grammar_parseable);
        assert_eq!(g[0].operator, Comparator::Gt);
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(matches!(
            parse_range_gold_str("\n{\"question_id\":1}"),
            Err(NumericError::Gold { line: 2, .. })
        ));
        let dup = r#"{"question_id":"q","candidate_sentence_id":"s","gold_in_range":true,"operator":"gt"}"#;
        assert!(parse_range_gold_str(&format!("{dup}\n{dup}")).is_err());
    }

    #[test]
    fn evaluates_against_lookups() {
        let gold = parse_range_gold_str(
            r#"{"question_id":"q","candidate_sentence_id":"s","gold_in_range":true,"operator":"gt"}"#,
        )
        .unwrap();
        let ev = evaluate_range_gold(
            &gold,
            |_| Some("whose A1C levels are greater than 10 ?".into()),
            |_| Some("when A1C levels are greater than 10%".into()),
            &CompareConfig::default(),
        )
        .unwrap();
        assert_eq!(ev.report.overall.accuracy, Some(1.0));
        assert!(evaluate_range_gold(&gold, |_| None, |_| None, &CompareConfig::default()).is_err());
    }
}
