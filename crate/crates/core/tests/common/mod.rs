#![allow(dead_code)]

pub mod oracles;

use std::path::PathBuf;

use cpgctx_core::corpus::{parse_guideline, CorpusIndex, ExtractionConfig};
use cpgctx_core::ontology::{load_knowledge, SemanticTypeRegistry};
use cpgctx_core::patients::{load_patients, CcsTable};
use cpgctx_core::questions::{generate_questions, QuestionTemplates};
use cpgctx_core::{GuidelineCorpus, KnowledgeBase, PatientRecord, QuestionInstance};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn read(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn selectors() -> ExtractionConfig {
    ExtractionConfig::from_json_str(&read("selectors.json")).unwrap()
}

pub fn html_corpus(name: &str) -> GuidelineCorpus {
    parse_guideline(&read(name), &selectors()).unwrap()
}

pub fn care() -> GuidelineCorpus {
    html_corpus("care.html")
}

pub fn care_index() -> CorpusIndex {
    CorpusIndex::new(&care())
}

pub fn knowledge() -> KnowledgeBase {
    load_knowledge(
        fixture("annotations.jsonl"),
        fixture("graph.jsonl"),
        fixture("mapping.jsonl"),
        &SemanticTypeRegistry::bundled(),
    )
    .unwrap()
}

pub fn patients() -> Vec<PatientRecord> {
    load_patients(fixture("patients.json")).unwrap()
}

pub fn ccs() -> CcsTable {
    CcsTable::load(fixture("ccs.csv")).unwrap()
}

pub fn templates() -> QuestionTemplates {
    QuestionTemplates::load(fixture("templates.json")).unwrap()
}

pub fn all_questions() -> Vec<QuestionInstance> {
    let (ccs, templates) = (ccs(), templates());
    patients()
        .iter()
        .flat_map(|p| generate_questions(p, &ccs, &templates).unwrap().questions)
        .collect()
}
