mod common;

use common::oracles;

use std::collections::HashSet;

use cpgctx_core::corpus::WordTokenizer;
use cpgctx_core::eval::{
    average_precision, evaluate_run, load_gold, metrics_table, parse_gold_str, topk_metrics, EvalError, RankedRun,
};
use proptest::prelude::*;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() < 1e-9
}

#[test]
fn fixture_run_against_hand_computed_values() {
    let gold = load_gold(common::fixture("gold.jsonl")).unwrap();
    let run = RankedRun::load(common::fixture("run.jsonl")).unwrap();
    let report = evaluate_run("lexical", &run, &gold, &common::care_index(), &WordTokenizer, Some(&common::ccs())).unwrap();

    // (question, AP, P@1, P@5, F1@10)
    let expected = [
        ("P01-q3-1", (1.0 + 2.0 / 3.0 + 3.0 / 5.0) / 3.0, 1.0, 0.6, 2.0 * 0.3 / 1.3),
        ("P01-q3-2", (1.0 + 2.0 / 3.0) / 2.0, 1.0, 0.4, 2.0 * 0.2 / 1.2),
        ("P03-q3-2", 1.0, 1.0, 0.2, 2.0 * 0.1 / 1.1),
        ("P04-q3-1", 0.2, 0.0, 0.2, 2.0 * 0.1 / 1.1),
        ("P06-q3-1", 0.5, 0.0, 0.2, 2.0 * 0.1 / 1.1),
        ("P06-q3-3", 1.0, 1.0, 0.4, 2.0 * 0.2 / 1.2),
    ];
    assert_eq!(report.questions.len(), expected.len());
    for (q, (id, ap, p1, p5, f1)) in report.questions.iter().zip(expected) {
        assert_eq!(q.question_id, id);
        assert!(close(q.ap, ap), "{id} ap {}", q.ap);
        assert!(close(q.p_at_1, p1), "{id}");
        assert!(close(q.p_at_5, p5), "{id}");
        assert!(close(q.f1_at_10, f1), "{id}");
        assert!(close(q.recall_at_10, 1.0), "{id}");
        assert!((0.0..=1.0).contains(&q.bleu));
    }

    let n = expected.len() as f64;
    let mean = |f: fn(&(&str, f64, f64, f64, f64)) -> f64| expected.iter().map(f).sum::<f64>() / n;
    let m = &report.metrics;
    assert_eq!(m.n_questions, 6);
    assert!(close(m.map, mean(|e| e.1)));
    assert!(close(m.p_at_1, mean(|e| e.2)));
    assert!(close(m.p_at_5, mean(|e| e.3)));
    assert!(close(m.f1_at_10, mean(|e| e.4)));
    assert!(close(m.map, 4.288_888_888_888_889 / 6.0));

    let skipped: Vec<&str> = report.skipped.iter().map(|s| s.question_id.as_str()).collect();
    assert_eq!(skipped, ["P10-q3-1", "P99-q3-1"]);

    let groups = report.groups.as_ref().unwrap();
    let total: usize = groups.iter().map(|g| g.metrics.n_questions).sum();
    assert_eq!(total, 6);
    assert!(groups.iter().any(|g| g.group == "Hypertension" && g.metrics.n_questions == 1));
}

#[test]
fn table_has_all_columns() {
    let gold = load_gold(common::fixture("gold.jsonl")).unwrap();
    let run = RankedRun::load(common::fixture("run.jsonl")).unwrap();
    let report = evaluate_run("lexical", &run, &gold, &common::care_index(), &WordTokenizer, None).unwrap();
    assert!(report.groups.is_none());
    let table = metrics_table(&[&report.metrics]);
    let header: Vec<&str> = table.lines().next().unwrap().split_whitespace().collect();
    assert_eq!(header, ["model", "bleu", "P@1", "P@5", "map", "f1", "recall"]);
    assert!(table.lines().nth(1).unwrap().contains("0.715"));
}

#[test]
fn unknown_sentence_in_run_is_an_error() {
    let gold = parse_gold_str(r#"{"question_id":"q","relevant":["g9-1.r3"]}"#).unwrap();
    let run = RankedRun::parse_str(r#"{"question_id":"q","ranked":["nope"]}"#).unwrap();
    let err = evaluate_run("m", &run, &gold, &common::care_index(), &WordTokenizer, None).unwrap_err();
    assert!(matches!(err, EvalError::UnknownSentence { .. }), "{err}");
}

#[test]
fn malformed_inputs_are_rejected() {
    assert!(parse_gold_str("{\"question_id\":\"q\"}").is_err());
    assert!(parse_gold_str("{\"question_id\":\"q\",\"relevant\":[]}\n{\"question_id\":\"q\",\"relevant\":[]}").is_err());
    assert!(RankedRun::parse_str("{\"question_id\":\"q\",\"ranked\":[\"a\",\"a\"]}").is_err());
    assert!(RankedRun::parse_str("{\"question_id\":\"q\",\"ranked\":[],\"extra\":1}").is_err());
}

fn ranking_and_relevant() -> impl Strategy<Value = (Vec<String>, HashSet<String>)> {
    (prop::sample::subsequence((0..30).collect::<Vec<u32>>(), 0..=20), prop::collection::hash_set(0u32..30, 1..=8))
        .prop_flat_map(|(items, rel)| (Just(items).prop_shuffle(), Just(rel)))
        .prop_map(|(items, rel)| {
            (
                items.into_iter().map(|i| format!("s{i}")).collect(),
                rel.into_iter().map(|i| format!("s{i}")).collect(),
            )
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn metrics_match_brute_force((ranking, relevant) in ranking_and_relevant(), k in 1usize..12) {
        let ap = average_precision(&ranking, &relevant).unwrap();
        prop_assert!(close(ap, oracles::average_precision(&ranking, &relevant)));
        prop_assert!((0.0..=1.0).contains(&ap));

        let t = topk_metrics(&ranking, &relevant, k).unwrap();
        let p = oracles::precision_at(&ranking, &relevant, k);
        let r = oracles::recall_at(&ranking, &relevant, k);
        prop_assert!(close(t.precision, p));
        prop_assert!(close(t.recall, r));
        prop_assert!(close(t.f1, oracles::f1(p, r)));
    }

    #[test]
    fn perfect_ranking_has_unit_ap(relevant in prop::collection::hash_set("[a-z]{3}", 1..8)) {
        let mut ranking: Vec<String> = relevant.iter().cloned().collect();
        ranking.sort();
        prop_assert!(close(average_precision(&ranking, &relevant).unwrap(), 1.0));
    }
}
