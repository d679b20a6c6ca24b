//! Replays the checked-in fuzz seeds through the parsers and the checks the
//! fuzz targets run on parsed values.

use std::fs;
use std::path::PathBuf;

use qdp_core::correlations::{zero_discord_test, DEFAULT_DISCORD_TOL};
use qdp_core::formats::{parse_bipartite, parse_choi, parse_density, parse_matrix, parse_superop};
use qdp_core::qdp::{cp_verdict, kraus_from_choi, DEFAULT_CP_TOL};

fn seeds(target: &str) -> Vec<(String, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty());
    out
}

fn accepted(target: &str, parse: impl Fn(&[u8]) -> bool) -> Vec<String> {
    seeds(target).into_iter().filter(|(_, b)| parse(b)).map(|(n, _)| n).collect()
}

#[test]
fn matrix_seeds() {
    assert_eq!(accepted("parse_matrix", |b| parse_matrix(b).is_ok()), ["identity2.json", "rect2x3.json"]);
}

#[test]
fn density_seeds() {
    assert_eq!(
        accepted("parse_density", |b| parse_density(b).is_ok()),
        ["complex.json", "degenerate3.json", "mixed.json", "plus.json"]
    );
}

#[test]
fn bipartite_seeds() {
    let ok = accepted("parse_bipartite", |b| match parse_bipartite(b) {
        Ok(rho) => {
            let _ = zero_discord_test(&rho, DEFAULT_DISCORD_TOL);
            true
        }
        Err(_) => false,
    });
    assert_eq!(ok, ["bell.json", "classical_quantum.json", "maximally_mixed.json", "qubit_qutrit.json"]);
}

#[test]
fn superop_seeds() {
    let ok = accepted("parse_superop", |b| match parse_superop(b) {
        Ok(l) => {
            let _ = cp_verdict(&l, DEFAULT_CP_TOL);
            true
        }
        Err(_) => false,
    });
    assert_eq!(ok, ["identity.json", "transpose.json"]);
}

#[test]
fn choi_seeds() {
    let ok = accepted("parse_choi", |b| match parse_choi(b) {
        Ok(c) => {
            let _ = c.to_superoperator();
            let _ = kraus_from_choi(&c, DEFAULT_CP_TOL);
            true
        }
        Err(_) => false,
    });
    assert_eq!(ok, ["depolarizing.json", "identity_channel.json", "not_hermitian.json", "transpose_swap.json"]);
}
