#![no_main]

use libfuzzer_sys::fuzz_target;
use qdp_core::formats::{canonical_json, matrix_json, parse_matrix};

fuzz_target!(|data: &[u8]| {
    if let Ok(m) = parse_matrix(data) {
        // whatever parses must survive a write/read cycle unchanged
        let again = parse_matrix(canonical_json(&matrix_json(&m)).as_bytes()).expect("re-parse");
        assert_eq!(again, m);
    }
});
