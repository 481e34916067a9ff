use std::collections::BTreeMap;

use serde::Serialize;

use crate::patients::{CcsTable, PatientRecord};

use super::{QuestionError, QuestionInstance, QuestionTemplates, QuestionType, Template};

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct GeneratedQuestions {
    pub questions: Vec<QuestionInstance>,
    pub warnings: Vec<String>,
}

/// Locale-independent number text: whole values without a fraction, others
/// in shortest round-trip form.
pub fn format_number(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{v:.0}")
    } else {
        format!("{v}")
    }
}

struct Builder<'a> {
    patient: &'a PatientRecord,
    out: Vec<QuestionInstance>,
}

impl Builder<'_> {
    fn push(
        &mut self,
        qtype: QuestionType,
        template_id: &str,
        template: &Template,
        slots: BTreeMap<String, String>,
        extra: impl FnOnce(&mut QuestionInstance),
    ) -> Result<(), QuestionError> {
        let n = self.out.iter().filter(|q| q.qtype == qtype).count() + 1;
        let mut q = QuestionInstance {
            id: format!("{}-q{}-{}", self.patient.id, qtype.number(), n),
            patient_id: self.patient.id.clone(),
            qtype,
            entity: qtype.entity(),
            risk_context: qtype == QuestionType::Medication,
            template_id: template_id.to_string(),
            text: template.render(&slots)?,
            slots,
            concept_key: None,
            feature_code: None,
            operator: None,
        };
        extra(&mut q);
        self.out.push(q);
        Ok(())
    }
}

fn slots(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

/// Builds the question list for one patient, ordered by question type and
/// then by feature rank, medication order or lab template order.
pub fn generate_questions(
    patient: &PatientRecord,
    ccs: &CcsTable,
    templates: &QuestionTemplates,
) -> Result<GeneratedQuestions, QuestionError> {
    let mut b = Builder {
        patient,
        out: Vec::new(),
    };
    let mut warnings = Vec::new();

    let (id, t) = templates.single(QuestionType::T2dmSummary);
    b.push(QuestionType::T2dmSummary, id, t, BTreeMap::new(), |_| {})?;

    match &patient.risk {
        Some(risk) => {
            let (id, t) = templates.single(QuestionType::RiskSummary);
            b.push(QuestionType::RiskSummary, id, t, BTreeMap::new(), |_| {})?;
            let (id, t) = templates.single(QuestionType::FeatureImportance);
            for f in risk.diagnostic_features() {
                let name = f
                    .label
                    .clone()
                    .or_else(|| ccs.get(&f.feature).map(|e| e.description.to_lowercase()))
                    .unwrap_or_else(|| f.feature.clone());
                b.push(
                    QuestionType::FeatureImportance,
                    id,
                    t,
                    slots(&[("feature", name)]),
                    |q| {
                        q.feature_code = Some(f.feature.clone());
                        q.concept_key = Some(format!("feature:{}", f.feature));
                    },
                )?;
            }
        }
        None => warnings.push(format!(
            "patient {} has no risk output; risk and feature questions omitted",
            patient.id
        )),
    }

    let (id, t) = templates.single(QuestionType::Medication);
    for m in &patient.medications {
        b.push(
            QuestionType::Medication,
            id,
            t,
            slots(&[("drug", m.class.clone())]),
            |q| q.concept_key = Some(format!("drug:{}", m.class)),
        )?;
    }

    for (id, spec, t) in templates.labs() {
        let lab = spec.lab.as_deref().expect("validated at construction");
        let Some(latest) = patient.latest_lab(lab) else {
            continue;
        };
        for &op in &spec.operators {
            b.push(
                QuestionType::LabValue,
                id,
                t,
                slots(&[
                    ("lab", lab.to_string()),
                    ("comparator", op.phrase().to_string()),
                    ("threshold", format_number(latest.value)),
                ]),
                |q| {
                    q.operator = Some(op);
                    q.concept_key = Some(format!("lab:{lab}"));
                },
            )?;
        }
    }

    Ok(GeneratedQuestions {
        questions: b.out,
        warnings,
    })
}
