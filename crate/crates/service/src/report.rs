use std::collections::BTreeMap;

use chrono::NaiveDate;
use cpgctx_core::patients::{ccs_rollup, AgeGroup, CoverageInterval, FeatureKind, LabResult, Sex};
use cpgctx_core::QuestionInstance;
use serde::{Deserialize, Serialize};

use crate::config::Severity;
use crate::error::ServiceError;
use crate::store::Store;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatientListEntry {
    pub id: String,
    pub age_group: AgeGroup,
    pub sex: Sex,
    pub risk_score: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Demographics {
    pub id: String,
    pub birth_date: NaiveDate,
    pub age_group: AgeGroup,
    pub sex: Sex,
    pub enrollment: Option<CoverageInterval>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VisitEvent {
    pub date: NaiveDate,
    pub codes: Vec<String>,
}

/// Visits and labs falling in one calendar month.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimelineMonth {
    /// `YYYY-MM`
    pub month: String,
    pub visits: Vec<VisitEvent>,
    pub labs: Vec<LabResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiskView {
    pub score: f64,
    pub horizon_days: u32,
    pub severity: Severity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureView {
    pub feature: String,
    pub label: String,
    pub weight: f64,
    pub kind: FeatureKind,
    /// Level 2 CCS grouping; `None` for demographic features.
    pub grouping: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatientReport {
    pub patient: Demographics,
    pub timeline: Vec<TimelineMonth>,
    pub risk: Option<RiskView>,
    pub features: Vec<FeatureView>,
    pub questions: Vec<QuestionInstance>,
    pub warnings: Vec<String>,
}

pub fn list_patients(store: &Store) -> Vec<PatientListEntry> {
    store
        .patients
        .values()
        .map(|p| PatientListEntry {
            id: p.id.clone(),
            age_group: p.age_group,
            sex: p.sex,
            risk_score: p.risk.as_ref().map(|r| r.score),
        })
        .collect()
}

fn slot(months: &mut BTreeMap<String, TimelineMonth>, date: NaiveDate) -> &mut TimelineMonth {
    let key = date.format("%Y-%m").to_string();
    months.entry(key.clone()).or_insert_with(|| TimelineMonth {
        month: key,
        visits: Vec::new(),
        labs: Vec::new(),
    })
}

pub fn patient_report(store: &Store, id: &str) -> Result<PatientReport, ServiceError> {
    let p = store.patient(id)?;

    let mut months: BTreeMap<String, TimelineMonth> = BTreeMap::new();
    for v in &p.visits {
        slot(&mut months, v.date).visits.push(VisitEvent {
            date: v.date,
            codes: v.codes.clone(),
        });
    }
    let mut labs = p.labs.clone();
    labs.sort_by(|a, b| a.date.cmp(&b.date).then_with(|| a.name.cmp(&b.name)));
    for l in labs {
        slot(&mut months, l.date).labs.push(l);
    }

    let features = p
        .risk
        .iter()
        .flat_map(|r| &r.feature_importances)
        .map(|f| {
            let diagnosis = f.kind == FeatureKind::Diagnosis;
            let label = f.label.clone().unwrap_or_else(|| {
                store
                    .ccs
                    .get(&f.feature)
                    .map_or_else(|| f.feature.clone(), |e| e.description.to_lowercase())
            });
            FeatureView {
                feature: f.feature.clone(),
                label,
                weight: f.weight,
                kind: f.kind,
                grouping: diagnosis.then(|| ccs_rollup(&f.feature, &store.ccs).to_string()),
            }
        })
        .collect();

    let generated = &store.questions[id];
    Ok(PatientReport {
        patient: Demographics {
            id: p.id.clone(),
            birth_date: p.birth_date,
            age_group: p.age_group,
            sex: p.sex,
            enrollment: p.enrollment,
        },
        timeline: months.into_values().collect(),
        risk: p.risk.as_ref().map(|r| RiskView {
            score: r.score,
            horizon_days: r.horizon_days,
            severity: store.config.severity.classify(r.score),
        }),
        features,
        questions: generated.questions.clone(),
        warnings: generated.warnings.clone(),
    })
}
