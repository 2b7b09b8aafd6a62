//! Property suites over a seeded random corpus of gentle algebras.

use crate::render::document;
use crate::Failure;
use gentle_core::alp::alp_basis;
use gentle_core::exceptional::ag_invariants_with;
use gentle_core::hom::chain_map_space_shifted;
use gentle_core::prelude::*;
use gentle_core::random::{random_corpus, RandomParams};
use gentle_core::words::enumerate_strings;
use serde_json::{json, Value};
use std::fmt::Write as _;

type Suite = fn(&GentleAlgebra, Parallelism) -> std::result::Result<usize, String>;

fn err(e: GentleError) -> String {
    e.to_string()
}

fn sorted_invariants(alg: &GentleAlgebra) -> std::result::Result<Vec<(usize, i32)>, String> {
    let mut v: Vec<(usize, i32)> = ag_invariants(alg).map_err(err)?.iter().map(|o| (o.n, o.m)).collect();
    v.sort();
    Ok(v)
}

fn squares(alg: &GentleAlgebra, _: Parallelism) -> std::result::Result<usize, String> {
    let mut n = 0;
    for w in enumerate_strings(alg, 4).iter().take(40) {
        for m in [-1, 0, 2] {
            if !unfold_string(alg, w, m).is_complex(alg) {
                return Err(format!("d^2 != 0 on {} at {m}", w.expr(alg)));
            }
            n += 1;
        }
    }
    Ok(n)
}

fn signs(alg: &GentleAlgebra, _: Parallelism) -> std::result::Result<usize, String> {
    let base = sorted_invariants(alg)?;
    let mut n = 0;
    for s in enumerate_sign_assignments(alg).into_iter().take(8) {
        if sorted_invariants(&alg.with_signs(s).map_err(err)?)? != base {
            return Err("invariants depend on the sign assignment".into());
        }
        n += 1;
    }
    Ok(n)
}

fn orbits(alg: &GentleAlgebra, par: Parallelism) -> std::result::Result<usize, String> {
    let (tables, _, orbits) = ag_invariants_with(alg, par).map_err(err)?;
    let mut scan: Vec<(usize, i64)> = orbits.iter().map(|o| (o.n, o.m as i64)).collect();
    let mut walk: Vec<(usize, i64)> = aag_cycles(&tables).map_err(err)?.iter().map(|c| (c.n, c.m as i64)).collect();
    scan.sort();
    walk.sort();
    if scan != walk {
        return Err(format!("orbit scan {scan:?}, thread walk {walk:?}"));
    }
    Ok(scan.len())
}

fn shifts(alg: &GentleAlgebra, _: Parallelism) -> std::result::Result<usize, String> {
    let words = enumerate_strings(alg, 3);
    let mut n = 0;
    for (k, v) in words.iter().enumerate().take(10) {
        let w = &words[(5 * k + 1) % words.len()];
        let x = unfold_string(alg, v, 0);
        let y = unfold_string(alg, w, 0);
        for t in -2..=2 {
            let base = hom_k_dim_shifted(alg, &x, &y, t);
            if base != hom_k_dim_shifted(alg, &shift(&x, 3), &shift(&y, 3), t) || base != hom_k_dim(alg, &x, &shift(&y, t)) {
                return Err(format!("Hom({}, {}[{t}]) is not shift-equivariant", v.expr(alg), w.expr(alg)));
            }
            n += 1;
        }
    }
    Ok(n)
}

fn basis(alg: &GentleAlgebra, _: Parallelism) -> std::result::Result<usize, String> {
    let words = enumerate_strings(alg, 3);
    let mut n = 0;
    for (k, v) in words.iter().enumerate().take(12) {
        let w = &words[(7 * k + 3) % words.len()];
        let x = unfold_string(alg, v, 0);
        for mw in -2..=2 {
            let y = unfold_string(alg, w, mw);
            let got = alp_basis(alg, v, 0, w, mw).len();
            let want = chain_map_space_shifted(alg, &x, &y, 0).dim();
            if got != want {
                return Err(format!("{} -> {}@{mw}: {got} combinatorial maps, {want} chain maps", v.expr(alg), w.expr(alg)));
            }
            n += 1;
        }
    }
    Ok(n)
}

fn replacement(alg: &GentleAlgebra, _: Parallelism) -> std::result::Result<usize, String> {
    let mut n = 0;
    for w in enumerate_strings(alg, 3).iter().take(10) {
        let nu = nakayama_on_projectives(alg, &unfold_string(alg, w, 0)).map_err(err)?;
        let p = perfect_replacement(alg, &nu).map_err(err)?;
        if p.cohomology_dims(alg) != nu.cohomology_dims(alg) {
            return Err(format!("replacement of the Nakayama image of {} changes cohomology", w.expr(alg)));
        }
        n += 1;
    }
    Ok(n)
}

fn parallel(alg: &GentleAlgebra, _: Parallelism) -> std::result::Result<usize, String> {
    let seq = classify_exceptional_cycles(alg, Parallelism::Sequential).map_err(err)?;
    let par = classify_exceptional_cycles(alg, Parallelism::Parallel).map_err(err)?;
    if seq != par {
        return Err("sequential and parallel classification differ".into());
    }
    Ok(seq.len())
}

const SUITES: [(&str, Suite); 7] = [
    ("differentials square to zero", squares),
    ("sign-assignment independence", signs),
    ("orbit scan matches thread walk", orbits),
    ("Hom is shift-equivariant", shifts),
    ("combinatorial basis counts", basis),
    ("replacement keeps cohomology", replacement),
    ("sequential and parallel agree", parallel),
];

pub fn run(seed: u64, count: usize, as_json: bool, par: Parallelism) -> std::result::Result<String, Failure> {
    let corpus = random_corpus(seed, count, &RandomParams::default());
    let mut results = Vec::new();
    for (name, suite) in SUITES {
        let mut cases = 0;
        let mut failure = None;
        for alg in &corpus {
            match suite(alg, par) {
                Ok(n) => cases += n,
                Err(why) => {
                    failure = Some(format!("{}: {why}", alg.name()));
                    break;
                }
            }
        }
        results.push((name, cases, failure));
    }
    let failed = results.iter().filter(|r| r.2.is_some()).count();
    let report = if as_json {
        let suites: Vec<Value> = results
            .iter()
            .map(|(name, cases, failure)| json!({ "name": name, "passed": failure.is_none(), "cases": cases, "failure": failure }))
            .collect();
        document(&json!({ "seed": seed, "algebras": corpus.len(), "suites": suites }))
    } else {
        let mut out = format!("seed {seed}, {} random algebras\n", corpus.len());
        for (name, cases, failure) in &results {
            match failure {
                None => writeln!(out, "PASS  {name} ({cases} cases)").unwrap(),
                Some(why) => writeln!(out, "FAIL  {name}: {why}").unwrap(),
            }
        }
        out
    };
    if failed > 0 {
        print!("{report}");
        return Err(Failure::Internal(format!("{failed} property suites failed")));
    }
    Ok(report)
}
