#![no_main]

use libfuzzer_sys::fuzz_target;
use qdp_core::formats::parse_choi;
use qdp_core::qdp::{kraus_from_choi, DEFAULT_CP_TOL};

fuzz_target!(|data: &[u8]| {
    if let Ok(c) = parse_choi(data) {
        let _ = c.to_superoperator();
        let _ = kraus_from_choi(&c, DEFAULT_CP_TOL);
    }
});
