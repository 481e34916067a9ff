#![no_main]

use cpgctx_core::patients::{ccs_rollup, CcsTable};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(table) = CcsTable::parse_csv_str(text) {
        let _ = ccs_rollup("I10", &table);
    }
});
