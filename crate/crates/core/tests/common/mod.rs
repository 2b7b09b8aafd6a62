#![allow(dead_code)]

use gentle_core::prelude::*;
use gentle_core::random::{random_corpus, RandomParams};

pub const FIXTURES: [&str; 6] = ["dual_numbers", "kronecker", "a2", "a3_hereditary", "a3_relation", "pent"];

pub fn fixture(name: &str) -> GentleAlgebra {
    let path = format!("{}/../../fixtures/{name}.gentle", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    load(&text).unwrap()
}

/// The fixed random corpus: 50 algebras with at most 6 vertices.
pub fn corpus() -> Vec<GentleAlgebra> {
    random_corpus(20261016, 50, &RandomParams { max_vertices: 6, ..RandomParams::default() })
}

/// Fixtures named in the mouth-level criteria plus the random corpus.
pub fn mouth_corpus() -> Vec<GentleAlgebra> {
    let mut out: Vec<GentleAlgebra> = ["a2", "kronecker", "a3_hereditary", "a3_relation", "pent"].iter().map(|n| fixture(n)).collect();
    out.extend(corpus());
    out
}
