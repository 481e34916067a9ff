#![no_main]

use cpgctx_core::augment::StrategyConfig;
use cpgctx_core::reader::ScorerSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(cfg) = text.parse::<StrategyConfig>() {
        let again: StrategyConfig = cfg.to_string().parse().unwrap();
        assert_eq!(again, cfg);
    }
    let _ = text.parse::<ScorerSpec>();
});
