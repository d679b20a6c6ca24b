#![no_main]

use libfuzzer_sys::fuzz_target;
use qdp_core::formats::parse_density;
use qdp_core::states::{spectrum_class, DEFAULT_GAP_TOL};

fuzz_target!(|data: &[u8]| {
    if let Ok(rho) = parse_density(data) {
        let _ = spectrum_class(&rho, DEFAULT_GAP_TOL);
    }
});
