use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{ccs_rollup, AgeGroup, CcsTable, PatientError, PatientRecord, Sex, UNMAPPED};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub feature: String,
    pub count: usize,
    pub percent: f64,
    pub highlighted: bool,
}

impl SummaryRow {
    fn new(feature: String, count: usize, total: usize) -> Self {
        let percent = 100.0 * count as f64 / total as f64;
        SummaryRow {
            feature,
            count,
            percent,
            highlighted: percent > 50.0,
        }
    }

    /// `count (percent)` with one decimal, e.g. `4 (20.0)`.
    pub fn cell(&self) -> String {
        format!("{} ({:.1})", self.count, self.percent)
    }
}

/// Frequency of demographic buckets and level 2 disease groupings across a
/// set of patients. Rows with zero count are omitted.
pub fn prototype_summary(
    patients: &[PatientRecord],
    ccs: &CcsTable,
) -> Result<Vec<SummaryRow>, PatientError> {
    if patients.is_empty() {
        return Err(PatientError::EmptyPatientList);
    }
    let n = patients.len();
    let mut rows = Vec::new();

    for group in [AgeGroup::UpTo44, AgeGroup::From45To54, AgeGroup::From55] {
        let count = patients.iter().filter(|p| p.age_group == group).count();
        if count > 0 {
            rows.push(SummaryRow::new(format!("Age at onset {}", group.label()), count, n));
        }
    }
    for sex in [Sex::Female, Sex::Male] {
        let count = patients.iter().filter(|p| p.sex == sex).count();
        if count > 0 {
            rows.push(SummaryRow::new(format!("SEX - {sex}"), count, n));
        }
    }

    let mut groupings: BTreeMap<&str, usize> = BTreeMap::new();
    for p in patients {
        let present: BTreeSet<&str> = p
            .visits
            .iter()
            .flat_map(|v| &v.codes)
            .map(|c| ccs_rollup(c, ccs))
            .filter(|g| *g != UNMAPPED)
            .collect();
        for g in present {
            *groupings.entry(g).or_default() += 1;
        }
    }
    rows.extend(
        groupings
            .into_iter()
            .map(|(g, count)| SummaryRow::new(g.to_string(), count, n)),
    );
    Ok(rows)
}
