//! Per-patient question generation from `${slot}` templates, and the
//! template answers for the patient-summary and risk-summary questions.

mod answer;
mod generate;
mod template;

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numeric::Comparator;

pub use answer::{answer_summary, AnswerSource, PopulationStats, TemplateAnswer};
pub use generate::{format_number, generate_questions, GeneratedQuestions};
pub use template::{render_pairs, Template};

#[derive(Debug, Error)]
pub enum QuestionError {
    #[error("template {pattern:?} at byte {offset}: {reason}")]
    Template {
        pattern: String,
        offset: usize,
        reason: String,
    },
    #[error("slot {0:?} has no value")]
    UnboundSlot(String),
    #[error("template config: {0}")]
    Config(String),
    #[error("template answers cover question types 1 and 2 only, got {0}")]
    UnsupportedType(QuestionType),
    #[error("patient {0} has no risk output")]
    MissingRisk(String),
    #[error("population rate {name} = {value} outside [0, 1]")]
    PopulationRate { name: &'static str, value: f64 },
    #[error("template config: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum QuestionType {
    T2dmSummary = 1,
    RiskSummary = 2,
    FeatureImportance = 3,
    Medication = 4,
    LabValue = 5,
}

impl QuestionType {
    pub const ALL: [QuestionType; 5] = [
        QuestionType::T2dmSummary,
        QuestionType::RiskSummary,
        QuestionType::FeatureImportance,
        QuestionType::Medication,
        QuestionType::LabValue,
    ];

    pub fn number(self) -> u8 {
        self as u8
    }

    pub fn entity(self) -> Entity {
        match self {
            QuestionType::RiskSummary => Entity::RiskPrediction,
            QuestionType::FeatureImportance => Entity::PostHocExplanation,
            _ => Entity::Patient,
        }
    }

    /// Whether answers come from the guideline reader rather than templates.
    pub fn uses_reader(self) -> bool {
        matches!(
            self,
            QuestionType::FeatureImportance | QuestionType::Medication | QuestionType::LabValue
        )
    }
}

impl From<QuestionType> for u8 {
    fn from(q: QuestionType) -> u8 {
        q as u8
    }
}

impl TryFrom<u8> for QuestionType {
    type Error = String;

    fn try_from(n: u8) -> Result<Self, Self::Error> {
        QuestionType::ALL
            .into_iter()
            .find(|q| q.number() == n)
            .ok_or_else(|| format!("question type must be 1-5, got {n}"))
    }
}

impl fmt::Display for QuestionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Entity {
    Patient,
    RiskPrediction,
    PostHocExplanation,
}

/// A rendered question bound to one patient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuestionInstance {
    pub id: String,
    pub patient_id: String,
    pub qtype: QuestionType,
    pub entity: Entity,
    /// Medication questions draw on the risk context as well as patient data.
    pub risk_context: bool,
    pub template_id: String,
    pub slots: BTreeMap<String, String>,
    pub text: String,
    /// Shared annotation key such as `feature:I10`, `drug:GLP-1 RA` or `lab:A1C`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub concept_key: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub feature_code: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub operator: Option<Comparator>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemplateSpec {
    pub qtype: QuestionType,
    pub pattern: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub operators: Vec<Comparator>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lab: Option<String>,
}

/// Template set keyed by template id. Types 1 to 4 have exactly one template
/// each; type 5 has one per lab.
#[derive(Debug, Clone)]
pub struct QuestionTemplates {
    specs: BTreeMap<String, (TemplateSpec, Template)>,
}

impl QuestionTemplates {
    pub fn from_specs(specs: BTreeMap<String, TemplateSpec>) -> Result<Self, QuestionError> {
        let mut parsed = BTreeMap::new();
        for (id, spec) in specs {
            let template = Template::parse(&spec.pattern)?;
            if spec.qtype == QuestionType::LabValue {
                if spec.lab.as_deref().is_none_or(|l| l.trim().is_empty()) {
                    return Err(QuestionError::Config(format!("lab template {id} names no lab")));
                }
                if spec.operators.is_empty() {
                    return Err(QuestionError::Config(format!("lab template {id} has no operators")));
                }
            }
            parsed.insert(id, (spec, template));
        }
        for qtype in &QuestionType::ALL[..4] {
            let n = parsed.values().filter(|(s, _)| s.qtype == *qtype).count();
            if n != 1 {
                return Err(QuestionError::Config(format!(
                    "expected one template for question type {qtype}, found {n}"
                )));
            }
        }
        Ok(QuestionTemplates { specs: parsed })
    }

    pub fn parse_json_str(text: &str) -> Result<Self, QuestionError> {
        Self::from_specs(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, QuestionError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| QuestionError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse_json_str(&text)
    }

    pub fn single(&self, qtype: QuestionType) -> (&str, &Template) {
        self.specs
            .iter()
            .find(|(_, (s, _))| s.qtype == qtype)
            .map(|(id, (_, t))| (id.as_str(), t))
            .expect("validated at construction")
    }

    pub fn labs(&self) -> impl Iterator<Item = (&str, &TemplateSpec, &Template)> {
        self.specs
            .iter()
            .filter(|(_, (s, _))| s.qtype == QuestionType::LabValue)
            .map(|(id, (s, t))| (id.as_str(), s, t))
    }
}

impl Default for QuestionTemplates {
    fn default() -> Self {
        let spec = |qtype, pattern: &str| TemplateSpec {
            qtype,
            pattern: pattern.to_string(),
            operators: Vec::new(),
            lab: None,
        };
        let mut specs = BTreeMap::new();
        specs.insert(
            "q1".to_string(),
            spec(
                QuestionType::T2dmSummary,
                "What is the patient's A1C value? What are their most frequent diagnoses codes?",
            ),
        );
        specs.insert(
            "q2".to_string(),
            spec(
                QuestionType::RiskSummary,
                "How does the predicted risk of the patient compare against the population?",
            ),
        );
        specs.insert(
            "q3".to_string(),
            spec(QuestionType::FeatureImportance, "What can be done for this patient's ${feature}?"),
        );
        specs.insert(
            "q4".to_string(),
            spec(
                QuestionType::Medication,
                "What do the guidelines state about the ${drug} drug the patient is taking?",
            ),
        );
        specs.insert(
            "q5-a1c".to_string(),
            TemplateSpec {
                qtype: QuestionType::LabValue,
                pattern: "What should be done for this patient, whose ${lab} levels are ${comparator} ${threshold} ?"
                    .to_string(),
                operators: Comparator::ALL.to_vec(),
                lab: Some("A1C".to_string()),
            },
        );
        Self::from_specs(specs).expect("default templates are valid")
    }
}
