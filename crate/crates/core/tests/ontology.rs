mod common;

use common::oracles::{bfs_hops, isa_closure};
use cpgctx_core::ontology::{AnnotationSet, OntologyGraph, SemanticTypeRegistry};
use proptest::prelude::*;

const HTN: &str = "38341003";
const CKD: &str = "709044004";
const CVD: &str = "49601007";

#[test]
fn fixture_graph_distances() {
    let kb = common::knowledge();
    let g = &kb.graph;
    assert_eq!(g.hop_distance(HTN, CKD), Some(3));
    assert_eq!(g.hop_distance(CKD, HTN), Some(3));
    assert_eq!(g.hop_distance(HTN, HTN), Some(0));
    assert_eq!(g.hop_distance(HTN, "not-a-code"), None);
    assert!(g.is_ancestor(CVD, HTN));
    assert!(!g.is_ancestor(HTN, CVD));
    assert!(!g.is_ancestor(HTN, HTN));
}

#[test]
fn annotation_lookup_by_question_key() {
    let kb = common::knowledge();
    assert!(!kb.annotations.for_question("feature:I10").is_empty());
    assert!(kb.annotations.for_question("feature:none").is_empty());
    assert!(!kb.annotations.for_sentence("g4-1.r1").is_empty());
    assert_eq!(kb.mapping.codes_for("C0020538"), [HTN.to_string()]);
}

#[test]
fn malformed_knowledge_lines_fail() {
    let reg = SemanticTypeRegistry::bundled();
    let bad = r#"{"sentence_id":"s","surface":"x","start":5,"end":2,"cui":"C1","semantic_type":"dsyn","is_noun":true}"#;
    assert!(AnnotationSet::parse_jsonl(bad, "a", &reg).is_err());
    assert!(OntologyGraph::parse_jsonl("{\"a\":\"x\"}", "g").is_err());
}

const N: usize = 50;

fn name(i: usize) -> String {
    format!("n{i}")
}

fn graph_edges() -> impl Strategy<Value = (usize, Vec<(usize, usize, bool)>)> {
    (2usize..=N).prop_flat_map(|n| (Just(n), prop::collection::vec((0..n, 0..n, any::<bool>()), 0..n * 2)))
}

fn build(edges: &[(usize, usize, bool)]) -> OntologyGraph {
    let names: Vec<(String, String, bool)> = edges.iter().map(|&(a, b, isa)| (name(a), name(b), isa)).collect();
    OntologyGraph::from_edges(names.iter().map(|(a, b, isa)| (a.as_str(), b.as_str(), *isa)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn hops_and_ancestry_match_oracles((n, edges) in graph_edges()) {
        let g = build(&edges);
        let d = bfs_hops(n, &edges);
        let up = isa_closure(n, &edges);
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (name(i), name(j));
                let present = g.contains(&a) && g.contains(&b);
                let expected = if present { d[i][j] } else { None };
                prop_assert_eq!(g.hop_distance(&a, &b), expected, "{} {}", a, b);
                prop_assert_eq!(g.is_ancestor(&b, &a), present && i != j && up[i][j], "{} up to {}", a, b);
            }
        }
    }
}
