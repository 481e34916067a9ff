mod common;

use std::collections::BTreeMap;

use common::*;
use cpgctx_core::patients::{
    cohort_filter, evaluate_criteria, load_patients, prototype_summary, CohortCriteria,
};
use cpgctx_core::questions::{answer_summary, generate_questions, AnswerSource, PopulationStats, QuestionType};
use serde_json::Value;

fn raw_patients() -> Vec<Value> {
    serde_json::from_str(&read("patients.json")).unwrap()
}

#[test]
fn each_cohort_case_fails_only_its_own_criterion() {
    let cohort = load_patients(fixture("cohort.json")).unwrap();
    let criteria = CohortCriteria::default();
    let by_id: BTreeMap<&str, _> = cohort
        .iter()
        .map(|p| (p.id.as_str(), evaluate_criteria(p, &criteria)))
        .collect();

    let flags = |id: &str| {
        let o = &by_id[id];
        [o.enough_t2dm_visits, o.continuously_enrolled, o.t2dm_dominant, o.age_in_range]
    };
    assert_eq!(flags("C-PASS"), [true; 4]);
    assert_eq!(flags("C-VISITS"), [false, true, true, true]);
    assert_eq!(flags("C-ENROLL"), [true, false, true, true]);
    assert_eq!(flags("C-DOMINANT"), [true, true, false, true]);
    assert_eq!(flags("C-AGE"), [true, true, true, false]);
    assert_eq!(by_id["C-DOMINANT"].other_diabetes_visits, 3);
    assert_eq!(by_id["C-AGE"].age_at_first_diagnosis, Some(68));

    let included = cohort_filter(&cohort, &criteria);
    assert_eq!(included.into_iter().collect::<Vec<_>>(), ["C-PASS"]);
}

#[test]
fn evaluation_patients_all_meet_the_criteria() {
    let patients = patients();
    let included = cohort_filter(&patients, &CohortCriteria::default());
    assert_eq!(included.len(), patients.len());
}

#[test]
fn summary_demographic_rows_match_raw_count() {
    let raw = raw_patients();
    let n = raw.len() as f64;
    let count = |key: &str, value: &str| raw.iter().filter(|p| p[key] == value).count();
    let expected = [
        ("Age at onset <= 44", count("age_group", "<=44")),
        ("Age at onset 45-54", count("age_group", "45-54")),
        ("Age at onset >= 55", count("age_group", ">=55")),
        ("SEX - FEMALE", count("sex", "F")),
        ("SEX - MALE", count("sex", "M")),
    ];
    let rows = prototype_summary(&patients(), &ccs()).unwrap();
    for (row, (label, c)) in rows.iter().zip(expected) {
        assert_eq!(row.feature, label);
        assert_eq!(row.count, c);
        assert!((row.percent - 100.0 * c as f64 / n).abs() < 1e-9);
        assert_eq!(row.highlighted, 100.0 * c as f64 / n > 50.0);
    }
}

#[test]
fn summary_rows_pinned() {
    let rows = prototype_summary(&patients(), &ccs()).unwrap();
    let got: Vec<(&str, String, bool)> = rows
        .iter()
        .map(|r| (r.feature.as_str(), r.cell(), r.highlighted))
        .collect();
    let expected = [
        ("Age at onset <= 44", "3 (15.0)", false),
        ("Age at onset 45-54", "4 (20.0)", false),
        ("Age at onset >= 55", "13 (65.0)", true),
        ("SEX - FEMALE", "12 (60.0)", true),
        ("SEX - MALE", "8 (40.0)", false),
        ("Delirium dementia and amnestic and other cognitive disorders", "2 (10.0)", false),
        ("Diabetes mellitus with complications", "3 (15.0)", false),
        ("Diabetes mellitus without complication", "20 (100.0)", true),
        ("Diseases of the heart", "3 (15.0)", false),
        ("Diseases of the urinary system", "3 (15.0)", false),
        ("Disorders of lipid metabolism", "8 (40.0)", false),
        ("Hypertension", "14 (70.0)", true),
        ("Intestinal obstruction and abdominal hernia", "2 (10.0)", false),
        ("Other nervous system disorders", "3 (15.0)", false),
        ("Other nutritional; endocrine; and metabolic disorders", "4 (20.0)", false),
    ];
    let expected: Vec<(&str, String, bool)> = expected.iter().map(|(f, c, h)| (*f, c.to_string(), *h)).collect();
    assert_eq!(got, expected);
}

#[test]
fn summary_rejects_empty_input() {
    assert!(prototype_summary(&[], &ccs()).is_err());
}

fn expected_question_count(p: &Value) -> usize {
    let risk = &p["risk"];
    let mut n = 1;
    if risk.is_object() {
        n += 1;
        n += risk["feature_importances"]
            .as_array()
            .map_or(0, |fs| fs.iter().filter(|f| f["kind"] != "demographic").count());
    }
    n += p["medications"].as_array().map_or(0, Vec::len);
    let has_a1c = p["labs"]
        .as_array()
        .is_some_and(|ls| ls.iter().any(|l| l["name"].as_str().is_some_and(|s| s.eq_ignore_ascii_case("A1C"))));
    if has_a1c {
        n += 3;
    }
    n
}

#[test]
fn question_counts_follow_patient_contents() {
    let (ccs, templates) = (ccs(), templates());
    let pinned = [8, 9, 8, 8, 7, 10, 4, 4, 5, 5, 6, 4, 5, 4, 6, 4, 4, 6, 4, 3];
    for ((p, raw), pinned) in patients().iter().zip(raw_patients()).zip(pinned) {
        let g = generate_questions(p, &ccs, &templates).unwrap();
        assert_eq!(g.questions.len(), expected_question_count(&raw), "{}", p.id);
        assert_eq!(g.questions.len(), pinned, "{}", p.id);
        let mut seen = std::collections::BTreeSet::new();
        assert!(g.questions.iter().all(|q| seen.insert(q.id.clone())));
        assert!(g.questions.windows(2).all(|w| w[0].qtype.number() <= w[1].qtype.number()));
    }
}

#[test]
fn regeneration_is_byte_identical() {
    let a = serde_json::to_string(&all_questions()).unwrap();
    let b = serde_json::to_string(&all_questions()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn lab_questions_carry_latest_value() {
    let qs = all_questions();
    let p01: Vec<_> = qs
        .iter()
        .filter(|q| q.patient_id == "P01" && q.qtype == QuestionType::LabValue)
        .collect();
    let ids: Vec<&str> = p01.iter().map(|q| q.id.as_str()).collect();
    assert_eq!(ids, ["P01-q5-1", "P01-q5-2", "P01-q5-3"]);
    assert!(p01.iter().all(|q| q.slots["threshold"] == "6.5"));
    assert!(p01.iter().all(|q| q.concept_key.as_deref() == Some("lab:A1C")));
}

#[test]
fn template_answers_for_types_one_and_two() {
    let patients = patients();
    let (ccs, templates) = (ccs(), templates());
    let pop = PopulationStats {
        medicare_ckd_rate: 0.12,
        cci3_ckd_rate: 0.25,
    };
    let p01 = &patients[0];
    let qs = generate_questions(p01, &ccs, &templates).unwrap().questions;

    let a1 = answer_summary(&qs[0], p01, &pop, &ccs).unwrap();
    assert!(a1.text.starts_with("Patient's A1C is 6.5 %."), "{}", a1.text);
    assert_eq!(a1.sources, [AnswerSource::PatientData]);

    let a2 = answer_summary(&qs[1], p01, &pop, &ccs).unwrap();
    assert!(a2.text.contains("the patient is 31.0 %"), "{}", a2.text);
    assert!(a2.text.contains("Medicare patients: 12.0 %"));
    assert!(a2.text.contains("score of 3 : 25.0 %"));

    let feature = qs.iter().find(|q| q.qtype == QuestionType::FeatureImportance).unwrap();
    assert!(answer_summary(feature, p01, &pop, &ccs).is_err());

    let bad = PopulationStats {
        medicare_ckd_rate: 12.0,
        cci3_ckd_rate: 0.25,
    };
    assert!(answer_summary(&qs[1], p01, &bad, &ccs).is_err());
}
