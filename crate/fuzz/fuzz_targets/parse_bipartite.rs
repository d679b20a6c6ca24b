#![no_main]

use libfuzzer_sys::fuzz_target;
use qdp_core::correlations::{zero_discord_test, DEFAULT_DISCORD_TOL};
use qdp_core::formats::parse_bipartite;

fuzz_target!(|data: &[u8]| {
    if let Ok(rho) = parse_bipartite(data) {
        // keep the degenerate-path search cheap
        if rho.dim_s() * rho.dim_b() <= 16 {
            let _ = zero_discord_test(&rho, DEFAULT_DISCORD_TOL);
        }
    }
});
