//! Numeric comparator phrases, interval agreement between a lab-value
//! question and a guideline sentence, and range-question accuracy.

mod accuracy;
mod comparator;
mod compare;
mod extract;
mod gold;
mod interval;

use thiserror::Error;

pub use accuracy::{numeric_accuracy, report_from_counts, AccuracyReport, AccuracyRow, ConfusionCounts};
pub use comparator::Comparator;
pub use compare::{
    compare_ranges, range_verdict, verdict_answer, verdict_clause, CompareConfig, MatchedPair,
    RangeSemantics, RangeVerdict, IN_RANGE, NO_COMPARABLE, OUT_OF_RANGE,
};
pub use extract::{extract_numeric_phrases, AlternateValue, Diagnostic, Extraction, NumericPhrase};
pub use gold::{
    evaluate_range_gold, load_range_gold, parse_range_gold_str, RangeEvaluation, RangeGold,
    RangeItemResult,
};
pub use interval::Interval;

#[derive(Debug, Error)]
pub enum NumericError {
    #[error("range gold line {line}: {reason}")]
    Gold { line: usize, reason: String },
    #[error("range gold names unknown question {0}")]
    UnknownQuestion(String),
    #[error("range gold names unknown sentence {0}")]
    UnknownSentence(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}
