//! Patient records with ingested risk-model outputs, cohort rules, CCS
//! rollups and the prototypical-patient summary table.

mod ccs;
mod cohort;
mod summary;

use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use ccs::{ccs_rollup, normalize_code, CcsEntry, CcsTable, UNMAPPED};
pub use cohort::{cohort_filter, evaluate_criteria, CohortCriteria, CriteriaOutcome};
pub use summary::{prototype_summary, SummaryRow};

#[derive(Debug, Error)]
pub enum PatientError {
    #[error("patient {patient}: {reason}")]
    Invalid { patient: String, reason: String },
    #[error("duplicate patient id {0}")]
    DuplicateId(String),
    #[error("patient file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("ccs table line {line}: {reason}")]
    Ccs { line: u64, reason: String },
    #[error("ccs table: {0}")]
    Csv(#[from] csv::Error),
    #[error("cohort criteria: {0}")]
    Criteria(String),
    #[error("prototype summary needs at least one patient")]
    EmptyPatientList,
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum AgeGroup {
    #[serde(rename = "<=44")]
    UpTo44,
    #[serde(rename = "45-54")]
    From45To54,
    #[serde(rename = ">=55")]
    From55,
}

impl AgeGroup {
    pub fn label(self) -> &'static str {
        match self {
            AgeGroup::UpTo44 => "<= 44",
            AgeGroup::From45To54 => "45-54",
            AgeGroup::From55 => ">= 55",
        }
    }

    pub fn from_age(years: u32) -> Self {
        match years {
            0..=44 => AgeGroup::UpTo44,
            45..=54 => AgeGroup::From45To54,
            _ => AgeGroup::From55,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sex {
    #[serde(rename = "F", alias = "female", alias = "FEMALE")]
    Female,
    #[serde(rename = "M", alias = "male", alias = "MALE")]
    Male,
}

impl fmt::Display for Sex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sex::Female => "FEMALE",
            Sex::Male => "MALE",
        })
    }
}

/// Continuous insurance coverage, both ends inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageInterval {
    pub start: NaiveDate,
    pub end: NaiveDate,
}

impl CoverageInterval {
    pub fn covers(&self, from: NaiveDate, to: NaiveDate) -> bool {
        self.start <= from && to <= self.end
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Visit {
    pub date: NaiveDate,
    pub codes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabResult {
    pub name: String,
    pub value: f64,
    #[serde(default)]
    pub unit: Option<String>,
    pub date: NaiveDate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Medication {
    pub name: String,
    pub class: String,
    pub start: NaiveDate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureKind {
    #[default]
    Diagnosis,
    Demographic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureImportance {
    pub feature: String,
    pub weight: f64,
    #[serde(default)]
    pub kind: FeatureKind,
    /// Human-readable name; falls back to the CCS description when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

fn default_horizon() -> u32 {
    365
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiskOutput {
    pub score: f64,
    #[serde(default = "default_horizon")]
    pub horizon_days: u32,
    #[serde(default)]
    pub feature_importances: Vec<FeatureImportance>,
}

impl RiskOutput {
    pub fn diagnostic_features(&self) -> impl Iterator<Item = &FeatureImportance> {
        self.feature_importances
            .iter()
            .filter(|f| f.kind == FeatureKind::Diagnosis)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatientRecord {
    pub id: String,
    pub birth_date: NaiveDate,
    pub age_group: AgeGroup,
    pub sex: Sex,
    #[serde(default)]
    pub enrollment: Option<CoverageInterval>,
    #[serde(default)]
    pub visits: Vec<Visit>,
    #[serde(default)]
    pub labs: Vec<LabResult>,
    #[serde(default)]
    pub medications: Vec<Medication>,
    #[serde(default)]
    pub risk: Option<RiskOutput>,
}

impl PatientRecord {
    pub fn validate(&self) -> Result<(), PatientError> {
        let invalid = |reason: String| PatientError::Invalid {
            patient: self.id.clone(),
            reason,
        };
        if self.id.trim().is_empty() {
            return Err(invalid("empty id".into()));
        }
        if let Some(pair) = self.visits.windows(2).find(|w| w[1].date < w[0].date) {
            return Err(invalid(format!(
                "visits out of order: {} after {}",
                pair[1].date, pair[0].date
            )));
        }
        if let Some(lab) = self.labs.iter().find(|l| !l.value.is_finite()) {
            return Err(invalid(format!("lab {} has a non-finite value", lab.name)));
        }
        if let Some(e) = &self.enrollment {
            if e.end < e.start {
                return Err(invalid("enrollment ends before it starts".into()));
            }
        }
        if let Some(risk) = &self.risk {
            if !(0.0..=1.0).contains(&risk.score) {
                return Err(invalid(format!("risk score {} outside [0, 1]", risk.score)));
            }
            if risk.horizon_days == 0 {
                return Err(invalid("horizon_days must be positive".into()));
            }
            if risk.feature_importances.iter().any(|f| !f.weight.is_finite()) {
                return Err(invalid("non-finite feature weight".into()));
            }
            let sorted = risk
                .feature_importances
                .windows(2)
                .all(|w| w[0].weight.abs() >= w[1].weight.abs());
            if !sorted {
                return Err(invalid(
                    "feature importances not sorted by absolute weight".into(),
                ));
            }
        }
        Ok(())
    }

    /// Most recent result for a lab, matched case-insensitively.
    pub fn latest_lab(&self, name: &str) -> Option<&LabResult> {
        self.labs
            .iter()
            .filter(|l| l.name.eq_ignore_ascii_case(name))
            .max_by_key(|l| l.date)
    }

    /// Diagnosis codes ordered by visit frequency, ties broken by code.
    pub fn codes_by_frequency(&self) -> Vec<(String, usize)> {
        let mut counts = std::collections::BTreeMap::<&str, usize>::new();
        for v in &self.visits {
            for c in &v.codes {
                *counts.entry(c.as_str()).or_default() += 1;
            }
        }
        let mut out: Vec<(String, usize)> =
            counts.into_iter().map(|(c, n)| (c.to_string(), n)).collect();
        out.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        out
    }
}

/// Parses a JSON array of patient records and validates each one.
pub fn parse_patients_str(text: &str) -> Result<Vec<PatientRecord>, PatientError> {
    let patients: Vec<PatientRecord> = serde_json::from_str(text)?;
    let mut seen = HashSet::new();
    for p in &patients {
        p.validate()?;
        if !seen.insert(p.id.as_str()) {
            return Err(PatientError::DuplicateId(p.id.clone()));
        }
    }
    Ok(patients)
}

pub fn load_patients(path: impl AsRef<Path>) -> Result<Vec<PatientRecord>, PatientError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| PatientError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_patients_str(&text)
}
