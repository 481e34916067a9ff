use serde::{Deserialize, Serialize};

use crate::patients::{CcsTable, PatientRecord};

use super::{format_number, render_pairs, QuestionError, QuestionInstance, QuestionType};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AnswerSource {
    PatientData,
    RiskModel,
    PopulationStats,
    Guideline,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TemplateAnswer {
    pub text: String,
    pub sources: Vec<AnswerSource>,
}

/// Population comparators for the risk summary, as probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PopulationStats {
    pub medicare_ckd_rate: f64,
    pub cci3_ckd_rate: f64,
}

impl PopulationStats {
    pub fn validate(&self) -> Result<(), QuestionError> {
        for (name, value) in [
            ("medicare_ckd_rate", self.medicare_ckd_rate),
            ("cci3_ckd_rate", self.cci3_ckd_rate),
        ] {
            if !(0.0..=1.0).contains(&value) {
                return Err(QuestionError::PopulationRate { name, value });
            }
        }
        Ok(())
    }
}

const A1C_PATTERN: &str = "Patient's A1C is ${a1c}. Their most frequent diagnosis codes are ${codes}.";
const NO_A1C_PATTERN: &str =
    "Patient has no A1C on record. Their most frequent diagnosis codes are ${codes}.";
const RISK_PATTERN: &str = "The predicted risk of chronic kidney disease the patient is ${risk} %. \
The population averages for the same condition are as follows: \
For Medicare patients: ${medicare} % \
For patients with Charlson Comorbidity Index (CCI) score of 3 : ${cci3} %";

fn percent(p: f64) -> String {
    format!("{:.1}", p * 100.0)
}

fn frequent_codes(patient: &PatientRecord, ccs: &CcsTable) -> String {
    let codes = patient.codes_by_frequency();
    if codes.is_empty() {
        return "none on record".to_string();
    }
    let names: Vec<String> = codes
        .iter()
        .take(3)
        .map(|(c, _)| ccs.get(c).map_or_else(|| c.clone(), |e| e.description.to_lowercase()))
        .collect();
    let mut text = names.join(", ");
    if codes.len() > 3 {
        text.push_str(", etc");
    }
    text
}

/// Template-filled answer for question types 1 and 2.
pub fn answer_summary(
    question: &QuestionInstance,
    patient: &PatientRecord,
    population: &PopulationStats,
    ccs: &CcsTable,
) -> Result<TemplateAnswer, QuestionError> {
    match question.qtype {
        QuestionType::T2dmSummary => {
            let codes = frequent_codes(patient, ccs);
            let text = match patient.latest_lab("A1C") {
                Some(lab) => {
                    let value = match lab.unit.as_deref() {
                        Some(u) if !u.is_empty() => format!("{} {u}", format_number(lab.value)),
                        _ => format_number(lab.value),
                    };
                    render_pairs(A1C_PATTERN, &[("a1c", value), ("codes", codes)])?
                }
                None => render_pairs(NO_A1C_PATTERN, &[("codes", codes)])?,
            };
            Ok(TemplateAnswer {
                text,
                sources: vec![AnswerSource::PatientData],
            })
        }
        QuestionType::RiskSummary => {
            let risk = patient
                .risk
                .as_ref()
                .ok_or_else(|| QuestionError::MissingRisk(patient.id.clone()))?;
            population.validate()?;
            let text = render_pairs(
                RISK_PATTERN,
                &[
                    ("risk", percent(risk.score)),
                    ("medicare", percent(population.medicare_ckd_rate)),
                    ("cci3", percent(population.cci3_ckd_rate)),
                ],
            )?;
            Ok(TemplateAnswer {
                text,
                sources: vec![AnswerSource::RiskModel, AnswerSource::PopulationStats],
            })
        }
        other => Err(QuestionError::UnsupportedType(other)),
    }
}
