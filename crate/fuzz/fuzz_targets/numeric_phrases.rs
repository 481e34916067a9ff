#![no_main]

use cpgctx_core::numeric::{extract_numeric_phrases, range_verdict, CompareConfig};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let _ = extract_numeric_phrases(text);
    let (q, a) = text.split_at(text.char_indices().nth(text.chars().count() / 2).map_or(0, |(i, _)| i));
    let v = range_verdict(q, a, &CompareConfig::default());
    assert!(!v.in_range || !v.matched_pairs.is_empty());
});
