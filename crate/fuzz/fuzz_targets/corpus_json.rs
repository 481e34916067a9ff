#![no_main]

use cpgctx_core::corpus::ExtractionConfig;
use cpgctx_core::GuidelineCorpus;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let _ = ExtractionConfig::from_json_str(text);
    if let Ok(corpus) = GuidelineCorpus::from_json_str(text) {
        let again = GuidelineCorpus::from_json_str(&corpus.to_json_pretty()).unwrap();
        assert_eq!(again, corpus);
    }
});
