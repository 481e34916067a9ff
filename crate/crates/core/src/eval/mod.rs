//! Ranked-run evaluation against gold sentence annotations.

mod bleu;
mod metrics;

use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{CorpusIndex, Tokenizer};
use crate::patients::{ccs_rollup, CcsTable, UNMAPPED};

pub use bleu::{bleu, sentence_bleu, BLEU_VARIANT};
pub use metrics::{average_precision, topk_metrics, TopK};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("relevant set is empty")]
    EmptyRelevant,
    #[error("k must be at least 1")]
    ZeroK,
    #[error("no candidate texts to score")]
    NoCandidates,
    #[error("{file} line {line}: {reason}")]
    Malformed {
        file: &'static str,
        line: usize,
        reason: String,
    },
    #[error("run for {question} ranks unknown sentence {sentence}")]
    UnknownSentence { question: String, sentence: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldAnnotation {
    pub question_id: String,
    pub relevant: Vec<String>,
    #[serde(default)]
    pub expert_validated: bool,
    /// Diagnosis code the question asks about, for CCS grouping.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub feature_code: Option<String>,
}

impl GoldAnnotation {
    pub fn relevant_set(&self) -> HashSet<String> {
        self.relevant.iter().cloned().collect()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RunLine {
    question_id: String,
    ranked: Vec<String>,
}

/// Question id to ranked sentence ids.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RankedRun {
    pub rankings: BTreeMap<String, Vec<String>>,
}

fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn read(path: &Path) -> Result<String, EvalError> {
    std::fs::read_to_string(path).map_err(|source| EvalError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn parse_gold_str(text: &str) -> Result<BTreeMap<String, GoldAnnotation>, EvalError> {
    let mut out = BTreeMap::new();
    for (line, raw) in lines(text) {
        let bad = |reason: String| EvalError::Malformed { file: "gold", line, reason };
        let g: GoldAnnotation = serde_json::from_str(raw).map_err(|e| bad(e.to_string()))?;
        if out.contains_key(&g.question_id) {
            return Err(bad(format!("duplicate question {}", g.question_id)));
        }
        out.insert(g.question_id.clone(), g);
    }
    Ok(out)
}

pub fn load_gold(path: impl AsRef<Path>) -> Result<BTreeMap<String, GoldAnnotation>, EvalError> {
    parse_gold_str(&read(path.as_ref())?)
}

impl RankedRun {
    pub fn parse_str(text: &str) -> Result<Self, EvalError> {
        let mut run = RankedRun::default();
        for (line, raw) in lines(text) {
            let bad = |reason: String| EvalError::Malformed { file: "run", line, reason };
            let r: RunLine = serde_json::from_str(raw).map_err(|e| bad(e.to_string()))?;
            let mut seen = HashSet::new();
            if let Some(dup) = r.ranked.iter().find(|s| !seen.insert(s.as_str())) {
                return Err(bad(format!("sentence {dup} ranked twice for {}", r.question_id)));
            }
            if run.rankings.insert(r.question_id.clone(), r.ranked).is_some() {
                return Err(bad(format!("duplicate question {}", r.question_id)));
            }
        }
        Ok(run)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, EvalError> {
        Self::parse_str(&read(path.as_ref())?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuestionMetrics {
    pub question_id: String,
    pub ap: f64,
    pub p_at_1: f64,
    pub p_at_5: f64,
    pub f1_at_10: f64,
    pub recall_at_10: f64,
    pub bleu: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ccs_group: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    pub model: String,
    pub n_questions: usize,
    pub map: f64,
    pub p_at_1: f64,
    pub p_at_5: f64,
    pub f1_at_10: f64,
    pub recall_at_10: f64,
    pub bleu: f64,
}

impl MetricsReport {
    fn from_questions(model: &str, qs: &[&QuestionMetrics]) -> Self {
        let n = qs.len();
        let mean = |f: fn(&QuestionMetrics) -> f64| {
            if n == 0 {
                0.0
            } else {
                qs.iter().map(|q| f(q)).sum::<f64>() / n as f64
            }
        };
        MetricsReport {
            model: model.to_string(),
            n_questions: n,
            map: mean(|q| q.ap),
            p_at_1: mean(|q| q.p_at_1),
            p_at_5: mean(|q| q.p_at_5),
            f1_at_10: mean(|q| q.f1_at_10),
            recall_at_10: mean(|q| q.recall_at_10),
            bleu: mean(|q| q.bleu),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Skipped {
    pub question_id: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupMetrics {
    pub group: String,
    pub metrics: MetricsReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub bleu_variant: &'static str,
    pub metrics: MetricsReport,
    pub questions: Vec<QuestionMetrics>,
    pub skipped: Vec<Skipped>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub groups: Option<Vec<GroupMetrics>>,
}

const COLUMNS: [&str; 7] = ["model", "bleu", "P@1", "P@5", "map", "f1", "recall"];

fn table_row(m: &MetricsReport) -> [String; 7] {
    [
        m.model.clone(),
        format!("{:.3}", m.bleu),
        format!("{:.3}", m.p_at_1),
        format!("{:.3}", m.p_at_5),
        format!("{:.3}", m.map),
        format!("{:.3}", m.f1_at_10),
        format!("{:.3}", m.recall_at_10),
    ]
}

/// Aligned text table for one or more reports.
pub fn metrics_table(reports: &[&MetricsReport]) -> String {
    let rows: Vec<[String; 7]> = reports.iter().map(|m| table_row(m)).collect();
    let mut widths = COLUMNS.map(str::len);
    for r in &rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.len());
        }
    }
    let render = |cells: &[&str]| {
        let mut line = String::new();
        for (i, (cell, w)) in cells.iter().zip(widths).enumerate() {
            if i == 0 {
                line.push_str(&format!("{cell:<w$}"));
            } else {
                line.push_str(&format!("  {cell:>w$}"));
            }
        }
        line.push('\n');
        line
    };
    let mut out = render(&COLUMNS);
    for r in &rows {
        out.push_str(&render(&r.iter().map(String::as_str).collect::<Vec<_>>()));
    }
    out
}

impl RunReport {
    pub fn table(&self) -> String {
        let mut refs = vec![&self.metrics];
        if let Some(groups) = &self.groups {
            refs.extend(groups.iter().map(|g| &g.metrics));
        }
        metrics_table(&refs)
    }
}

/// Scores every run question that has a non-empty gold set. The others are
/// listed in `skipped` and excluded from the means.
pub fn evaluate_run(
    model: &str,
    run: &RankedRun,
    gold: &BTreeMap<String, GoldAnnotation>,
    corpus: &CorpusIndex,
    tokenizer: &dyn Tokenizer,
    ccs: Option<&CcsTable>,
) -> Result<RunReport, EvalError> {
    let mut questions = Vec::new();
    let mut skipped = Vec::new();
    for (qid, ranking) in &run.rankings {
        let Some(g) = gold.get(qid) else {
            skipped.push(Skipped { question_id: qid.clone(), reason: "no gold annotation".into() });
            continue;
        };
        let relevant = g.relevant_set();
        if relevant.is_empty() {
            skipped.push(Skipped { question_id: qid.clone(), reason: "empty relevant set".into() });
            continue;
        }
        let text_of = |id: &String| {
            corpus.get(id).map(|s| s.text.as_str()).ok_or_else(|| EvalError::UnknownSentence {
                question: qid.clone(),
                sentence: id.clone(),
            })
        };
        let candidates: Vec<&str> = ranking.iter().take(10).map(text_of).collect::<Result<_, _>>()?;
        let references: Vec<&str> = g
            .relevant
            .iter()
            .filter_map(|id| corpus.get(id).map(|s| s.text.as_str()))
            .collect();
        let bleu_score = if candidates.is_empty() {
            0.0
        } else {
            bleu(&candidates, &references, tokenizer, 4)?
        };
        let at10 = topk_metrics(ranking, &relevant, 10)?;
        questions.push(QuestionMetrics {
            question_id: qid.clone(),
            ap: average_precision(ranking, &relevant)?,
            p_at_1: topk_metrics(ranking, &relevant, 1)?.precision,
            p_at_5: topk_metrics(ranking, &relevant, 5)?.precision,
            f1_at_10: at10.f1,
            recall_at_10: at10.recall,
            bleu: bleu_score,
            ccs_group: ccs.map(|t| {
                g.feature_code
                    .as_deref()
                    .map_or(UNMAPPED, |c| ccs_rollup(c, t))
                    .to_string()
            }),
        });
    }
    let all: Vec<&QuestionMetrics> = questions.iter().collect();
    let metrics = MetricsReport::from_questions(model, &all);
    let groups = ccs.map(|_| {
        let mut by_group: BTreeMap<&str, Vec<&QuestionMetrics>> = BTreeMap::new();
        for q in &questions {
            by_group.entry(q.ccs_group.as_deref().unwrap_or(UNMAPPED)).or_default().push(q);
        }
        by_group
            .into_iter()
            .map(|(group, qs)| GroupMetrics {
                group: group.to_string(),
                metrics: MetricsReport::from_questions(&format!("{model} [{group}]"), &qs),
            })
            .collect()
    });
    Ok(RunReport {
        bleu_variant: BLEU_VARIANT,
        metrics,
        questions,
        skipped,
        groups,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn run_rejects_duplicates() {
        assert!(RankedRun::parse_str(r#"{"question_id":"q","ranked":["a","a"]}"#).is_err());
        let two = "{\"question_id\":\"q\",\"ranked\":[\"a\"]}\n{\"question_id\":\"q\",\"ranked\":[\"b\"]}";
        assert!(matches!(RankedRun::parse_str(two), Err(EvalError::Malformed { line: 2, .. })));
    }

    #[test]
    fn gold_parses_defaults() {
        let g = parse_gold_str(r#"{"question_id":"q","relevant":["a"]}"#).unwrap();
        assert!(!g["q"].expert_validated);
        assert!(g["q"].feature_code.is_none());
    }

    #[test]
    fn table_has_header_and_row() {
        let m = MetricsReport {
            model: "lexical".into(),
            n_questions: 1,
            map: 0.438,
            p_at_1: 0.5,
            p_at_5: 0.2,
            f1_at_10: 0.1,
            recall_at_10: 0.405,
            bleu: 0.19,
        };
        let t = metrics_table(&[&m]);
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines[0].split_whitespace().collect::<Vec<_>>(), COLUMNS);
        assert_eq!(
            lines[1].split_whitespace().collect::<Vec<_>>(),
            ["lexical", "0.190", "0.500", "0.200", "0.438", "0.100", "0.405"]
        );
        assert_eq!(lines[0].len(), lines[1].len());
    }
}
