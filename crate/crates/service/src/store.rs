use std::collections::BTreeMap;
use std::sync::Arc;

use cpgctx_core::corpus::{chunk_passages, corpus_stats, parse_guideline, CorpusIndex, CoverageStats, ExtractionConfig};
use cpgctx_core::ontology::{load_knowledge, SemanticTypeRegistry};
use cpgctx_core::patients::load_patients;
use cpgctx_core::questions::{generate_questions, GeneratedQuestions, QuestionTemplates};
use cpgctx_core::reader::Idf;
use cpgctx_core::{CcsTable, GuidelineCorpus, KnowledgeBase, Passage, PatientRecord, Tokenizer, WordTokenizer};

use crate::config::ServiceConfig;
use crate::error::ServiceError;

/// Everything the service reads, loaded once and never mutated.
pub struct Store {
    pub config: ServiceConfig,
    pub corpus: GuidelineCorpus,
    pub index: CorpusIndex,
    pub passages: Vec<Passage>,
    pub knowledge: KnowledgeBase,
    pub patients: BTreeMap<String, PatientRecord>,
    pub questions: BTreeMap<String, GeneratedQuestions>,
    pub ccs: CcsTable,
    pub tokenizer: Arc<dyn Tokenizer>,
    pub idf: Arc<Idf>,
    pub stats: CoverageStats,
}

fn load_err<E: ToString>(what: &'static str) -> impl FnOnce(E) -> ServiceError {
    move |e| ServiceError::Load {
        what,
        reason: e.to_string(),
    }
}

fn read(path: &std::path::Path, what: &'static str) -> Result<String, ServiceError> {
    std::fs::read_to_string(path).map_err(|e| ServiceError::Load {
        what,
        reason: format!("{}: {e}", path.display()),
    })
}

/// Corpus JSON, or HTML run through the selector config when one is given.
pub fn load_corpus(config: &ServiceConfig) -> Result<GuidelineCorpus, ServiceError> {
    match &config.selectors {
        Some(selectors) => {
            let selectors =
                ExtractionConfig::from_json_str(&read(selectors, "selectors")?).map_err(load_err("selectors"))?;
            parse_guideline(&read(&config.corpus, "corpus")?, &selectors).map_err(load_err("corpus"))
        }
        None => GuidelineCorpus::load(&config.corpus).map_err(load_err("corpus")),
    }
}

impl Store {
    pub fn load(config: ServiceConfig) -> Result<Self, ServiceError> {
        let tokenizer: Arc<dyn Tokenizer> = Arc::new(WordTokenizer);
        let corpus = load_corpus(&config)?;
        let registry = match &config.semantic_types {
            Some(p) => SemanticTypeRegistry::load(p).map_err(load_err("semantic types"))?,
            None => SemanticTypeRegistry::bundled(),
        };
        let knowledge = load_knowledge(&config.annotations, &config.graph, &config.mapping, &registry)
            .map_err(load_err("knowledge"))?;
        let ccs = CcsTable::load(&config.ccs).map_err(load_err("ccs"))?;
        let templates = match &config.templates {
            Some(p) => QuestionTemplates::load(p).map_err(load_err("templates"))?,
            None => QuestionTemplates::default(),
        };
        let mut patients = BTreeMap::new();
        let mut questions = BTreeMap::new();
        for p in load_patients(&config.patients).map_err(load_err("patients"))? {
            let generated = generate_questions(&p, &ccs, &templates).map_err(load_err("questions"))?;
            questions.insert(p.id.clone(), generated);
            patients.insert(p.id.clone(), p);
        }
        let passages = chunk_passages(&corpus, tokenizer.as_ref(), config.max_tokens).map_err(load_err("passages"))?;
        let index = CorpusIndex::new(&corpus);
        let idf = Arc::new(Idf::from_texts(
            tokenizer.as_ref(),
            index.sentences().iter().map(|s| s.text.as_str()),
        ));
        let stats = corpus_stats(&corpus, tokenizer.as_ref(), Some(&knowledge.annotations));
        tracing::info!(
            patients = patients.len(),
            passages = passages.len(),
            sentences = stats.sentence_count,
            "store loaded"
        );
        Ok(Store {
            config,
            corpus,
            index,
            passages,
            knowledge,
            patients,
            questions,
            ccs,
            tokenizer,
            idf,
            stats,
        })
    }

    pub fn patient(&self, id: &str) -> Result<&PatientRecord, ServiceError> {
        self.patients
            .get(id)
            .ok_or_else(|| ServiceError::UnknownPatient(id.to_string()))
    }
}
