#![no_main]

use cpgctx_core::patients::{evaluate_criteria, parse_patients_str, CcsTable, CohortCriteria};
use cpgctx_core::questions::{generate_questions, QuestionTemplates};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(patients) = parse_patients_str(text) {
        for p in &patients {
            let _ = evaluate_criteria(p, &CohortCriteria::default());
            let _ = generate_questions(p, &CcsTable::default(), &QuestionTemplates::default());
        }
    }
});
