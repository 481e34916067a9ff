#![no_main]

use cpgctx_core::ontology::{AnnotationSet, ConceptMapping, OntologyGraph, SemanticTypeRegistry};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let _ = AnnotationSet::parse_jsonl(text, "fuzz", &SemanticTypeRegistry::bundled());
    let _ = ConceptMapping::parse_jsonl(text, "fuzz");
    if let Ok(g) = OntologyGraph::parse_jsonl(text, "fuzz") {
        let codes: Vec<&str> = g.codes().take(8).collect();
        for a in &codes {
            for b in &codes {
                assert_eq!(g.hop_distance(a, b), g.hop_distance(b, a));
                let _ = g.is_ancestor(a, b);
            }
        }
    }
});
