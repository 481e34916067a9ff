#![no_main]

use cpgctx_core::questions::{QuestionTemplates, Template};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(t) = Template::parse(text) {
        let values = t.slots().map(|s| (s.to_string(), "x".to_string())).collect();
        t.render(&values).unwrap();
    }
    let _ = QuestionTemplates::parse_json_str(text);
});
