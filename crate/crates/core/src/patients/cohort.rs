use std::collections::BTreeSet;

use chrono::{Datelike, Months, NaiveDate};
use serde::{Deserialize, Serialize};

use super::{normalize_code, PatientError, PatientRecord};

/// Inclusion rules for the T2DM cohort.
///
/// Code patterns are prefixes compared after [`normalize_code`]; `*`
/// matches any single character, so `250.*0` covers `250.00` through `250.90`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct CohortCriteria {
    pub min_t2dm_visits: usize,
    pub lookback_enrollment_months: u32,
    pub age_min: u32,
    pub age_max: u32,
    pub t2dm_code_prefixes: Vec<String>,
    pub other_diabetes_prefixes: Vec<String>,
}

impl Default for CohortCriteria {
    fn default() -> Self {
        CohortCriteria {
            min_t2dm_visits: 2,
            lookback_enrollment_months: 12,
            age_min: 19,
            age_max: 64,
            t2dm_code_prefixes: ["E11", "250.*0", "250.*2", "362.0"].map(String::from).to_vec(),
            other_diabetes_prefixes: ["E10", "E13", "250.*1", "250.*3"].map(String::from).to_vec(),
        }
    }
}

fn matches_pattern(code: &str, pattern: &str) -> bool {
    let code: Vec<char> = normalize_code(code).chars().collect();
    let pattern: Vec<char> = normalize_code(pattern).chars().collect();
    code.len() >= pattern.len()
        && pattern.iter().zip(&code).all(|(p, c)| *p == '*' || p == c)
}

fn visit_matches(codes: &[String], patterns: &[String]) -> bool {
    codes
        .iter()
        .any(|c| patterns.iter().any(|p| matches_pattern(c, p)))
}

fn full_years(birth: NaiveDate, on: NaiveDate) -> i64 {
    let mut years = i64::from(on.year() - birth.year());
    if (on.month(), on.day()) < (birth.month(), birth.day()) {
        years -= 1;
    }
    years
}

impl CohortCriteria {
    pub fn validate(&self) -> Result<(), PatientError> {
        if self.age_min >= self.age_max {
            return Err(PatientError::Criteria(format!(
                "age_min {} must be below age_max {}",
                self.age_min, self.age_max
            )));
        }
        Ok(())
    }
}

/// Per-criterion result for one patient.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriteriaOutcome {
    pub t2dm_visits: usize,
    pub other_diabetes_visits: usize,
    pub first_t2dm_diagnosis: Option<NaiveDate>,
    pub age_at_first_diagnosis: Option<i64>,
    pub enough_t2dm_visits: bool,
    pub continuously_enrolled: bool,
    pub t2dm_dominant: bool,
    pub age_in_range: bool,
}

impl CriteriaOutcome {
    pub fn included(&self) -> bool {
        self.enough_t2dm_visits && self.continuously_enrolled && self.t2dm_dominant && self.age_in_range
    }
}

pub fn evaluate_criteria(patient: &PatientRecord, criteria: &CohortCriteria) -> CriteriaOutcome {
    let t2dm: Vec<NaiveDate> = patient
        .visits
        .iter()
        .filter(|v| visit_matches(&v.codes, &criteria.t2dm_code_prefixes))
        .map(|v| v.date)
        .collect();
    let other_diabetes_visits = patient
        .visits
        .iter()
        .filter(|v| visit_matches(&v.codes, &criteria.other_diabetes_prefixes))
        .count();
    let first = t2dm.iter().min().copied();
    let age = first.map(|d| full_years(patient.birth_date, d));
    let continuously_enrolled = match (first, patient.enrollment) {
        (Some(first), Some(cov)) => first
            .checked_sub_months(Months::new(criteria.lookback_enrollment_months))
            .is_some_and(|from| cov.covers(from, first)),
        _ => false,
    };
    CriteriaOutcome {
        t2dm_visits: t2dm.len(),
        other_diabetes_visits,
        first_t2dm_diagnosis: first,
        age_at_first_diagnosis: age,
        enough_t2dm_visits: t2dm.len() >= criteria.min_t2dm_visits,
        continuously_enrolled,
        t2dm_dominant: t2dm.len() > other_diabetes_visits,
        age_in_range: age.is_some_and(|a| {
            (i64::from(criteria.age_min)..=i64::from(criteria.age_max)).contains(&a)
        }),
    }
}

/// Ids of patients meeting every criterion.
pub fn cohort_filter<'a>(
    patients: impl IntoIterator<Item = &'a PatientRecord>,
    criteria: &CohortCriteria,
) -> BTreeSet<String> {
    patients
        .into_iter()
        .filter(|p| evaluate_criteria(p, criteria).included())
        .map(|p| p.id.clone())
        .collect()
}
