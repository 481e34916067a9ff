//! One PASS/FAIL line per acceptance criterion.
//!
//! Criteria listed in `UNATTAINABLE` still run and still print FAIL when they
//! fail, but do not change the exit status.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use axum::body::Body;
use axum::http::Request;
use common::oracles;
use cpgctx::{router, AppState, ServiceConfig, Store};
use cpgctx_core::augment::{
    answer_question, prefilter_ontology, prefilter_semantic, question_annotations, AugmentContext, SemanticFilter,
    StrategyConfig, DEFAULT_HOP_GRID,
};
use cpgctx_core::corpus::{chunk_passages, corpus_stats};
use cpgctx_core::eval::{average_precision, parse_gold_str, topk_metrics};
use cpgctx_core::numeric::{
    evaluate_range_gold, load_range_gold, report_from_counts, Comparator, CompareConfig, ConfusionCounts,
};
use cpgctx_core::ontology::{load_knowledge, OntologyGraph, SemanticTypeRegistry};
use cpgctx_core::patients::{cohort_filter, evaluate_criteria, load_patients, prototype_summary, CohortCriteria};
use cpgctx_core::questions::generate_questions;
use cpgctx_core::reader::{rank_candidates, Idf, LexicalScorer};
use cpgctx_core::{GuidelineCorpus, KnowledgeBase, Passage, QuestionInstance, WordTokenizer};
use http_body_util::BodyExt;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use tower::ServiceExt;

const UNATTAINABLE: [&str; 1] = ["confusion arithmetic"];

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:?}, limit {limit:?}"))?;
    Ok(took)
}

fn metric_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(7);
    let (mut map, mut map_oracle) = (0.0, 0.0);
    for case in 0..200 {
        let mut pool: Vec<String> = (0..30).map(|i| format!("s{i}")).collect();
        pool.shuffle(&mut rng);
        let ranking: Vec<String> = pool[..rng.random_range(0..=20)].to_vec();
        pool.shuffle(&mut rng);
        let relevant: HashSet<String> = pool[..rng.random_range(1..=8)].iter().cloned().collect();

        let ap = average_precision(&ranking, &relevant).map_err(|e| e.to_string())?;
        let ap_oracle = oracles::average_precision(&ranking, &relevant);
        ensure(ap == ap_oracle, || format!("case {case}: AP {ap} vs {ap_oracle}"))?;
        map += ap;
        map_oracle += ap_oracle;
        for k in [1, 5, 10] {
            let t = topk_metrics(&ranking, &relevant, k).map_err(|e| e.to_string())?;
            let p = oracles::precision_at(&ranking, &relevant, k);
            let r = oracles::recall_at(&ranking, &relevant, k);
            ensure(t.precision == p && t.recall == r && t.f1 == oracles::f1(p, r), || {
                format!("case {case} k={k}: {t:?} vs P {p} R {r}")
            })?;
        }
    }
    ensure(map / 200.0 == map_oracle / 200.0, || "MAP differs".into())?;
    let took = within(start, Duration::from_secs(5))?;
    Ok(format!("200 rankings, exact, {took:.2?}"))
}

fn confusion_arithmetic() -> Outcome {
    let report = report_from_counts(&[
        (Comparator::Lt, ConfusionCounts::new(2, 3, 1, 0)),
        (Comparator::Eq, ConfusionCounts::new(1, 2, 2, 0)),
        (Comparator::Gt, ConfusionCounts::new(4, 2, 0, 0)),
    ]);
    let o = report.overall.counts;
    ensure((o.tp, o.tn, o.fp, o.fn_) == (7, 7, 3, 0), || format!("overall counts {o:?}"))?;
    let overall = report.overall.accuracy.unwrap_or(f64::NAN);
    let lesser = report.row(Comparator::Lt).and_then(|r| r.accuracy).unwrap_or(f64::NAN);
    let detail = format!("overall {overall:.4} (total {}), lesser {lesser:.4}", o.total());
    ensure((overall - 0.78).abs() <= 0.005, || format!("{detail}; overall not within 0.005 of 0.78"))?;
    ensure((lesser - 0.84).abs() <= 0.005, || format!("{detail}; lesser not within 0.005 of 0.84"))?;
    Ok(detail)
}

fn graph_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(11);
    for case in 0..100 {
        let n = rng.random_range(2..=50);
        let edges: Vec<(usize, usize, bool)> = (0..rng.random_range(0..2 * n))
            .map(|_| (rng.random_range(0..n), rng.random_range(0..n), rng.random_bool(0.5)))
            .collect();
        let names: Vec<(String, String, bool)> =
            edges.iter().map(|&(a, b, isa)| (format!("n{a}"), format!("n{b}"), isa)).collect();
        let g = OntologyGraph::from_edges(names.iter().map(|(a, b, isa)| (a.as_str(), b.as_str(), *isa)));
        let hops = oracles::bfs_hops(n, &edges);
        let up = oracles::isa_closure(n, &edges);
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (format!("n{i}"), format!("n{j}"));
                let present = g.contains(&a) && g.contains(&b);
                let want = if present { hops[i][j] } else { None };
                let got = g.hop_distance(&a, &b);
                ensure(got == want, || format!("case {case}: hops {a}-{b} {got:?} vs {want:?}"))?;
                let anc = present && i != j && up[i][j];
                ensure(g.is_ancestor(&b, &a) == anc, || format!("case {case}: ancestor {b} of {a}"))?;
            }
        }
    }
    let took = within(start, Duration::from_secs(10))?;
    Ok(format!("100 graphs, exact, {took:.2?}"))
}

struct Setting {
    corpus: GuidelineCorpus,
    passages: Vec<Passage>,
    kb: KnowledgeBase,
    questions: Vec<QuestionInstance>,
    max_tokens: usize,
}

fn scorer(corpus: &GuidelineCorpus) -> LexicalScorer {
    let sentences = corpus.sentences();
    let idf = Idf::from_texts(&WordTokenizer, sentences.iter().map(|s| s.text.as_str()));
    LexicalScorer::new(Arc::new(WordTokenizer), Arc::new(idf))
}

fn care_setting() -> Setting {
    let corpus = common::care();
    Setting {
        passages: chunk_passages(&corpus, &WordTokenizer, 40).unwrap(),
        corpus,
        kb: common::knowledge(),
        questions: common::all_questions().into_iter().filter(|q| q.qtype.uses_reader()).collect(),
        max_tokens: 40,
    }
}

fn distractor_setting() -> Setting {
    let corpus = common::html_corpus("distractor.html");
    let kb = load_knowledge(
        common::fixture("distractor_annotations.jsonl"),
        common::fixture("graph.jsonl"),
        common::fixture("mapping.jsonl"),
        &SemanticTypeRegistry::bundled(),
    )
    .unwrap();
    Setting {
        passages: chunk_passages(&corpus, &WordTokenizer, 16).unwrap(),
        corpus,
        kb,
        questions: serde_json::from_str(&common::read("distractor_questions.json")).unwrap(),
        max_tokens: 16,
    }
}

fn ctx(s: &Setting) -> AugmentContext<'_> {
    AugmentContext {
        passages: &s.passages,
        knowledge: &s.kb,
        tokenizer: &WordTokenizer,
        max_tokens: s.max_tokens,
    }
}

fn strategy_laws() -> Outcome {
    let mut checked = 0;
    for s in [care_setting(), distractor_setting()] {
        let lex = scorer(&s.corpus);
        let all: BTreeSet<String> = s.passages.iter().flat_map(|p| p.sentences.iter().map(|x| x.id.clone())).collect();
        for q in &s.questions {
            let anns = question_annotations(q, &s.kb.annotations);
            let filter = SemanticFilter::for_question_type(q.qtype);
            let sem: BTreeSet<String> = prefilter_semantic(anns, &s.passages, &s.kb.annotations, &filter)
                .sentences
                .into_iter()
                .map(|x| x.id)
                .collect();
            ensure(sem.is_subset(&all), || format!("{}: semantic filter added sentences", q.id))?;
            let mut previous: Option<BTreeSet<String>> = None;
            for hops in std::iter::once(0).chain(DEFAULT_HOP_GRID) {
                let kept: BTreeSet<String> =
                    prefilter_ontology(anns, &s.passages, &s.kb.annotations, &s.kb.graph, &s.kb.mapping, hops, true)
                        .sentences
                        .into_iter()
                        .map(|x| x.id)
                        .collect();
                ensure(kept.is_subset(&all), || format!("{}: hop filter added sentences", q.id))?;
                if let Some(prev) = &previous {
                    ensure(prev.is_subset(&kept), || format!("{}: not monotone at {hops} hops", q.id))?;
                }
                previous = Some(kept);
            }

            let base = answer_question(q, &StrategyConfig::base(), &lex, ctx(&s)).map_err(|e| e.to_string())?;
            let reader = rank_candidates(&lex, &q.text, &s.passages, StrategyConfig::base().top_k).map_err(|e| e.to_string())?;
            let base_ids: Vec<&str> = base.candidates.iter().map(|c| c.base.sentence_id.as_str()).collect();
            let reader_ids: Vec<&str> = reader.candidates.iter().map(|c| c.sentence_id.as_str()).collect();
            ensure(base_ids == reader_ids, || format!("{}: base differs from reader", q.id))?;

            for code in ["overlap:2a", "overlap:2b", "ontosort:5a", "ontosort:5b", "ontosort:5c"] {
                let cfg: StrategyConfig = code.parse().unwrap();
                let a = answer_question(q, &cfg, &lex, ctx(&s)).map_err(|e| e.to_string())?;
                let b = answer_question(q, &cfg, &lex, ctx(&s)).map_err(|e| e.to_string())?;
                ensure(a == b, || format!("{}: {code} not deterministic", q.id))?;
                let mut sorted: Vec<&str> = a.candidates.iter().map(|c| c.base.sentence_id.as_str()).collect();
                let mut expected = base_ids.clone();
                sorted.sort();
                expected.sort();
                ensure(sorted == expected, || format!("{}: {code} is not a permutation", q.id))?;
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} questions across care and distractor fixtures"))
}

fn augmentation_benefit() -> Outcome {
    let s = distractor_setting();
    let gold = parse_gold_str(&common::read("distractor_gold.jsonl")).map_err(|e| e.to_string())?;
    let lex = scorer(&s.corpus);
    let map = |strategy: &str| -> Result<f64, String> {
        let cfg: StrategyConfig = strategy.parse().unwrap();
        let mut sum = 0.0;
        for q in &s.questions {
            let out = answer_question(q, &cfg, &lex, ctx(&s)).map_err(|e| e.to_string())?;
            let ranked: Vec<String> = out.candidates.iter().map(|c| c.base.sentence_id.clone()).collect();
            sum += average_precision(&ranked, &gold[&q.id].relevant_set()).map_err(|e| e.to_string())?;
        }
        Ok(sum / s.questions.len() as f64)
    };
    let (base, semantic) = (map("base")?, map("semantic")?);
    let detail = format!("semantic MAP {semantic:.3} vs base MAP {base:.3}");
    ensure(semantic > base, || detail.clone())?;
    Ok(detail)
}

fn numeric_range() -> Outcome {
    let index = common::care_index();
    let questions: HashMap<String, String> = common::all_questions().into_iter().map(|q| (q.id, q.text)).collect();
    let gold = load_range_gold(common::fixture("range_gold.jsonl")).map_err(|e| e.to_string())?;
    ensure(gold.len() == 18, || format!("{} gold items", gold.len()))?;
    let ev = evaluate_range_gold(
        &gold,
        |id| questions.get(id).cloned(),
        |id| index.get(id).map(|s| s.text.clone()),
        &CompareConfig::default(),
    )
    .map_err(|e| e.to_string())?;
    let table = ev.report.table();
    let labels: Vec<&str> = table.lines().skip(1).map(|l| l.split("  ").next().unwrap_or("").trim()).collect();
    ensure(labels == ["Overall", "Lesser Than", "Equal To", "Greater Than"], || format!("rows {labels:?}"))?;
    ensure(ev.report.by_operator.iter().all(|r| r.counts.total() == 6), || "6 items per operator".into())?;
    let acc = ev.parseable_report.overall.accuracy;
    ensure(acc == Some(1.0), || format!("parseable accuracy {acc:?}"))?;
    Ok(format!(
        "overall {:.2}, parseable subset {} items at 1.00",
        ev.report.overall.accuracy.unwrap_or(0.0),
        ev.parseable_report.overall.counts.total()
    ))
}

fn corpus_round_trip() -> Outcome {
    for name in ["two_chapter.html", "care.html", "distractor.html"] {
        let c = common::html_corpus(name);
        let back = GuidelineCorpus::from_json_str(&c.to_json_pretty()).map_err(|e| e.to_string())?;
        ensure(back == c, || format!("{name}: round trip differs"))?;
        let passages = chunk_passages(&c, &WordTokenizer, 512).map_err(|e| e.to_string())?;
        ensure(passages.iter().all(|p| p.token_count <= 512 && !p.oversized), || format!("{name}: passage over 512"))?;
        let flat: Vec<String> = passages.iter().flat_map(|p| p.sentences.iter().map(|s| s.id.clone())).collect();
        let order: Vec<String> = c.sentences().into_iter().map(|s| s.id).collect();
        ensure(flat == order, || format!("{name}: passages do not partition the sentences"))?;
        let stats = corpus_stats(&c, &WordTokenizer, None);
        let (sentences, tokens) = oracles::count_by_hand(&common::read(name));
        ensure((stats.sentence_count, stats.token_count) == (sentences, tokens), || {
            format!("{name}: stats {}/{} vs hand count {sentences}/{tokens}", stats.sentence_count, stats.token_count)
        })?;
    }
    Ok("3 HTML fixtures".into())
}

fn question_counts() -> Outcome {
    let raw: Vec<serde_json::Value> = serde_json::from_str(&common::read("patients.json")).map_err(|e| e.to_string())?;
    let (ccs, templates) = (common::ccs(), common::templates());
    for (p, raw) in common::patients().iter().zip(&raw) {
        let diag = raw["risk"]["feature_importances"]
            .as_array()
            .map_or(0, |fs| fs.iter().filter(|f| f["kind"] != "demographic").count());
        let meds = raw["medications"].as_array().map_or(0, Vec::len);
        let labs = if p.latest_lab("A1C").is_some() { 3 } else { 0 };
        let got = generate_questions(p, &ccs, &templates).map_err(|e| e.to_string())?.questions.len();
        ensure(got == 2 + diag + meds + labs, || format!("{}: {got} questions", p.id))?;
    }
    let a = serde_json::to_vec(&common::all_questions()).unwrap();
    let b = serde_json::to_vec(&common::all_questions()).unwrap();
    ensure(a == b, || "regeneration differs".into())?;
    Ok(format!("{} patients, {} questions, byte-identical", raw.len(), common::all_questions().len()))
}

fn cohort_and_summary() -> Outcome {
    let cohort = load_patients(common::fixture("cohort.json")).map_err(|e| e.to_string())?;
    let criteria = CohortCriteria::default();
    for p in &cohort {
        let o = evaluate_criteria(p, &criteria);
        let failed: Vec<&str> = [
            ("C-VISITS", o.enough_t2dm_visits),
            ("C-ENROLL", o.continuously_enrolled),
            ("C-DOMINANT", o.t2dm_dominant),
            ("C-AGE", o.age_in_range),
        ]
        .iter()
        .filter(|(_, ok)| !ok)
        .map(|(id, _)| *id)
        .collect();
        let expected: Vec<&str> = if p.id == "C-PASS" { vec![] } else { vec![p.id.as_str()] };
        ensure(failed == expected, || format!("{} fails {failed:?}", p.id))?;
    }
    let included = cohort_filter(&cohort, &criteria);
    ensure(included.iter().eq(["C-PASS"].iter()), || format!("included {included:?}"))?;

    let rows = prototype_summary(&common::patients(), &common::ccs()).map_err(|e| e.to_string())?;
    let find = |f: &str| rows.iter().find(|r| r.feature == f).ok_or_else(|| format!("missing row {f}"));
    let full = find("Diabetes mellitus without complication")?;
    let part = find("Age at onset 45-54")?;
    ensure(full.count == 20 && full.percent == 100.0 && full.highlighted, || format!("{full:?}"))?;
    ensure(part.count == 4 && part.percent == 20.0 && !part.highlighted, || format!("{part:?}"))?;
    ensure(rows.len() == 15, || format!("{} rows", rows.len()))?;
    Ok(format!("4 exclusions, 1 inclusion, {} summary rows", rows.len()))
}

async fn service_determinism() -> Outcome {
    let start = Instant::now();
    let cfg = ServiceConfig::load(common::fixture("config.json")).map_err(|e| e.to_string())?;
    let state = AppState::loaded(Store::load(cfg).map_err(|e| e.to_string())?);
    let call = |method: &'static str, uri: String, body: &'static str| {
        let app = router(state.clone());
        async move {
            let req = Request::builder()
                .method(method)
                .uri(uri)
                .header("content-type", "application/json")
                .body(if body.is_empty() { Body::empty() } else { Body::from(body) })
                .unwrap();
            let resp = app.oneshot(req).await.unwrap();
            let status = resp.status().as_u16();
            (status, resp.into_body().collect().await.unwrap().to_bytes().to_vec())
        }
    };
    let (s, list) = call("GET", "/patients".into(), "").await;
    ensure(s == 200, || format!("/patients {s}"))?;
    let list: Vec<serde_json::Value> = serde_json::from_slice(&list).unwrap();
    let mut answered = 0;
    for p in &list {
        let id = p["id"].as_str().unwrap();
        let (s, report) = call("GET", format!("/patients/{id}/report"), "").await;
        ensure(s == 200, || format!("report {id} {s}"))?;
        let report: serde_json::Value = serde_json::from_slice(&report).unwrap();
        for q in report["questions"].as_array().unwrap() {
            let qid = q["id"].as_str().unwrap();
            let uri = format!("/patients/{id}/questions/{qid}/answer");
            let body = r#"{"strategy":"base","scorer":"lexical"}"#;
            let (s1, a) = call("POST", uri.clone(), body).await;
            let (s2, b) = call("POST", uri, body).await;
            ensure(s1 == 200 && s2 == 200 && a == b, || format!("{qid}: {s1}/{s2}, identical {}", a == b))?;
            answered += 1;
        }
    }
    let (s, _) = call("GET", "/corpus/stats".into(), "").await;
    ensure(s == 200, || format!("/corpus/stats {s}"))?;
    let (s, _) = call("GET", "/patients/NOPE/report".into(), "").await;
    ensure(s == 404, || format!("unknown patient {s}"))?;
    let took = within(start, Duration::from_secs(30))?;
    Ok(format!("{answered} answers repeated byte-identical, {took:.2?}"))
}

fn main() -> ExitCode {
    let runtime = tokio::runtime::Builder::new_multi_thread().enable_all().build().unwrap();
    let results: Vec<(&str, Outcome)> = vec![
        ("metric oracle equivalence", metric_oracle()),
        ("confusion arithmetic", confusion_arithmetic()),
        ("graph oracle", graph_oracle()),
        ("strategy laws", strategy_laws()),
        ("augmentation benefit", augmentation_benefit()),
        ("numeric range end-to-end", numeric_range()),
        ("corpus round trip and chunking", corpus_round_trip()),
        ("question count formula", question_counts()),
        ("cohort criteria and summary", cohort_and_summary()),
        ("service determinism", runtime.block_on(service_determinism())),
    ];
    let mut blocking = 0;
    for (name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) if UNATTAINABLE.contains(name) => println!("FAIL  {name}: {detail} [unattainable, recorded]"),
            Err(detail) => {
                blocking += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    let passed = results.iter().filter(|(_, o)| o.is_ok()).count();
    println!("acceptance: {passed}/{} passed, {blocking} blocking failures", results.len());
    if blocking == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
