#![no_main]

use libfuzzer_sys::fuzz_target;
use qdp_core::formats::parse_superop;
use qdp_core::qdp::{cp_verdict, DEFAULT_CP_TOL};

fuzz_target!(|data: &[u8]| {
    if let Ok(l) = parse_superop(data) {
        let _ = cp_verdict(&l, DEFAULT_CP_TOL);
    }
});
