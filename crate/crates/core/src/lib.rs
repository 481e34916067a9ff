//! Contextual explanations for clinical risk predictions, drawn from
//! clinical-practice-guideline text.
//!
//! The crate is organised by pipeline stage:
//!
//! * [`corpus`] turns guideline HTML into a structured corpus and scorer-sized passages.
//! * [`ontology`] holds concept annotations and the disease graph used for hop and ancestor queries.
//! * [`patients`] ingests patient records and model outputs, cohort rules and CCS rollups.
//! * [`questions`] renders the per-patient question set and the template answers.
//! * [`reader`] ranks answer candidates with a lexical baseline or a remote model service.
//! * [`augment`] applies semantic and ontology knowledge before or after ranking.
//! * [`numeric`] parses comparator phrases and decides whether lab values are in range.
//! * [`eval`] scores ranked runs against gold annotations.

pub mod augment;
pub mod corpus;
pub mod eval;
pub mod numeric;
pub mod ontology;
pub mod patients;
pub mod questions;
pub mod reader;

pub use corpus::{GuidelineCorpus, Passage, Sentence, Tokenizer, WordTokenizer};
pub use ontology::{AnnotationSet, ConceptMapping, KnowledgeBase, OntologyGraph};
pub use patients::{CcsTable, PatientRecord};
pub use questions::{QuestionInstance, QuestionType};
pub use reader::{AnswerCandidate, Scorer};
