#![no_main]

use cpgctx_core::eval::{parse_gold_str, RankedRun};
use cpgctx_core::numeric::parse_range_gold_str;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let _ = parse_gold_str(text);
    let _ = RankedRun::parse_str(text);
    let _ = parse_range_gold_str(text);
});
