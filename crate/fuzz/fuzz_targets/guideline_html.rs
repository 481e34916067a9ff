#![no_main]

use cpgctx_core::corpus::{chunk_passages, parse_guideline, ExtractionConfig};
use cpgctx_core::WordTokenizer;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(html) = std::str::from_utf8(data) else { return };
    if let Ok(corpus) = parse_guideline(html, &ExtractionConfig::default()) {
        let passages = chunk_passages(&corpus, &WordTokenizer, 64).unwrap();
        let n: usize = passages.iter().map(|p| p.sentences.len()).sum();
        assert_eq!(n, corpus.sentences().len());
    }
});
