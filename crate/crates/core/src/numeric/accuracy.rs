use serde::{Deserialize, Serialize};

use super::Comparator;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: usize,
    pub tn: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl ConfusionCounts {
    pub fn new(tp: usize, tn: usize, fp: usize, fn_: usize) -> Self {
        ConfusionCounts { tp, tn, fp, fn_ }
    }

    pub fn record(&mut self, predicted_in: bool, gold_in: bool) {
        match (predicted_in, gold_in) {
            (true, true) => self.tp += 1,
            (false, false) => self.tn += 1,
            (true, false) => self.fp += 1,
            (false, true) => self.fn_ += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.tp + self.tn + self.fp + self.fn_
    }

    /// `(tp + tn) / total`, undefined for an empty group.
    pub fn accuracy(&self) -> Option<f64> {
        let total = self.total();
        (total > 0).then(|| (self.tp + self.tn) as f64 / total as f64)
    }

    fn add(&mut self, other: &ConfusionCounts) {
        self.tp += other.tp;
        self.tn += other.tn;
        self.fp += other.fp;
        self.fn_ += other.fn_;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccuracyRow {
    pub label: String,
    pub counts: ConfusionCounts,
    pub accuracy: Option<f64>,
}

impl AccuracyRow {
    fn new(label: &str, counts: ConfusionCounts) -> Self {
        AccuracyRow {
            label: label.to_string(),
            accuracy: counts.accuracy(),
            counts,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccuracyReport {
    pub overall: AccuracyRow,
    pub by_operator: Vec<AccuracyRow>,
}

impl AccuracyReport {
    pub fn row(&self, op: Comparator) -> Option<&AccuracyRow> {
        self.by_operator.iter().find(|r| r.label == op.label())
    }

    /// Aligned table: Comparison, Accuracy, TP, TN, FP, FN, Total.
    pub fn table(&self) -> String {
        let mut out = format!(
            "{:<14}{:>10}{:>5}{:>5}{:>5}{:>5}{:>7}\n",
            "Comparison", "Accuracy", "TP", "TN", "FP", "FN", "Total"
        );
        for row in std::iter::once(&self.overall).chain(&self.by_operator) {
            let acc = row.accuracy.map_or_else(|| "-".to_string(), |a| format!("{a:.2}"));
            let c = &row.counts;
            out.push_str(&format!(
                "{:<14}{:>10}{:>5}{:>5}{:>5}{:>5}{:>7}\n",
                row.label,
                acc,
                c.tp,
                c.tn,
                c.fp,
                c.fn_,
                c.total()
            ));
        }
        out
    }
}

/// Builds the report from per-operator counts; the overall row is their sum.
pub fn report_from_counts(groups: &[(Comparator, ConfusionCounts)]) -> AccuracyReport {
    let mut overall = ConfusionCounts::default();
    let by_operator = Comparator::ALL
        .iter()
        .map(|op| {
            let mut c = ConfusionCounts::default();
            for (_, g) in groups.iter().filter(|(o, _)| o == op) {
                c.add(g);
            }
            overall.add(&c);
            AccuracyRow::new(op.label(), c)
        })
        .collect();
    AccuracyReport {
        overall: AccuracyRow::new("Overall", overall),
        by_operator,
    }
}

/// Confusion counts grouped by operator from `(operator, predicted, gold)`.
pub fn numeric_accuracy(
    verdicts: impl IntoIterator<Item = (Comparator, bool, bool)>,
) -> AccuracyReport {
    let mut groups: Vec<(Comparator, ConfusionCounts)> =
        Comparator::ALL.iter().map(|&op| (op, ConfusionCounts::default())).collect();
    for (op, predicted, gold) in verdicts {
        let slot = groups.iter_mut().find(|(o, _)| *o == op).expect("all operators present");
        slot.1.record(predicted, gold);
    }
    report_from_counts(&groups)
}
