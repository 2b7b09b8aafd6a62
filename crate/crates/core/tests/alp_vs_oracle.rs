mod common;

use gentle_core::alp::{alp_basis, chain_vector, graph_maps, graph_self_hom_bound, MapKind};
use gentle_core::hom::graded_profile;
use gentle_core::words::{visit_strings, HomotopyString};
use gentle_core::complexes::unfold_string;
use gentle_core::hom::{chain_map_space_shifted, is_chain_map};
use gentle_core::linalg::Mat;
use gentle_core::prelude::*;
use gentle_core::threads::ThreadKind;

fn check_algebra(alg: &GentleAlgebra) {
    let t = enumerate_threads(alg).unwrap();
    let threads: Vec<_> = t.permitted.iter().chain(&t.forbidden).collect();
    for v in &threads {
        let sv = v.as_string(alg);
        let x = unfold_string(alg, &sv, 0);
        for w in &threads {
            let sw = w.as_string(alg);
            let y0 = unfold_string(alg, &sw, 0);
            let (xl, xh) = x.support().unwrap();
            let (yl, yh) = y0.support().unwrap();
            for mw in (xl - yh)..=(xh - yl) {
                let y = unfold_string(alg, &sw, mw);
                let basis = alp_basis(alg, &sv, 0, &sw, mw);
                let oracle = chain_map_space_shifted(alg, &x, &y, 0).dim();
                let label = format!("{} -> {}@{mw} in {}", v.label(alg), w.label(alg), alg.name());
                assert_eq!(basis.len(), oracle, "{label}: {basis:?}");
                let vecs: Vec<Vec<Q>> = basis.iter().map(|m| chain_vector(alg, &sv, 0, &sw, mw, m)).collect();
                for (m, vec) in basis.iter().zip(&vecs) {
                    assert!(is_chain_map(alg, &x, &y, 0, vec), "{label}: {m:?} is not a chain map");
                }
                if !vecs.is_empty() {
                    assert_eq!(Mat::from_columns(vecs[0].len(), &vecs).rank(), vecs.len(), "{label}: dependent basis");
                }
                if v.kind == ThreadKind::Forbidden && w.kind == ThreadKind::Forbidden {
                    let graphs = graph_maps(alg, &sv, 0, &sw, mw);
                    assert!(graphs.len() <= 1, "{label}: {} graph maps", graphs.len());
                    assert!(graphs.iter().all(|g| g.kind == MapKind::Graph));
                }
            }
        }
    }
}

#[test]
fn fixtures_match_oracle() {
    for name in common::FIXTURES {
        check_algebra(&common::fixture(name));
    }
}

#[test]
fn random_corpus_matches_oracle() {
    for alg in common::corpus() {
        check_algebra(&alg);
    }
}

fn rank_f2(mut rows: Vec<Vec<bool>>) -> usize {
    let mut rank = 0;
    let width = rows.first().map_or(0, |r| r.len());
    for c in 0..width {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][c]) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[c] {
                row.iter_mut().zip(&pivot).for_each(|(x, y)| *x ^= y);
            }
        }
        rank += 1;
    }
    rank
}

/// The bound recomputed from the general graph-map enumeration.
fn reference_bound(alg: &GentleAlgebra, w: &HomotopyString) -> (usize, usize) {
    let n = w.len() + 1;
    let prof = w.degree_profile();
    let span = prof.iter().max().unwrap() - prof.iter().min().unwrap();
    let (mut all, mut robust) = (0, 0);
    for t in -span..=span {
        let maps = graph_maps(alg, w, 0, w, -t);
        let pattern = |m: &gentle_core::alp::CombMap| {
            let mut bits = vec![false; n * n];
            for &(j, i, p) in &m.components {
                if alg.is_trivial(p) {
                    bits[j * n + i] = true;
                }
            }
            bits
        };
        all += rank_f2(maps.iter().map(pattern).collect());
        robust += rank_f2(maps.iter().filter(|m| m.components.iter().all(|&(j, i, _)| j != n - 1 && i != n - 1)).map(pattern).collect());
    }
    (all, robust)
}

#[test]
fn graph_bound_matches_general_enumeration() {
    let mut algs: Vec<GentleAlgebra> = common::FIXTURES.iter().map(|n| common::fixture(n)).collect();
    algs.extend(common::corpus().into_iter().take(20));
    for alg in &algs {
        visit_strings(alg, 6, |w, _| {
            if !w.is_empty() {
                assert_eq!(graph_self_hom_bound(alg, w), reference_bound(alg, w), "{} in {}", w.expr(alg), alg.name());
            }
            true
        });
    }
}

#[test]
fn graph_bound_is_a_lower_bound() {
    let mut algs: Vec<GentleAlgebra> = common::FIXTURES.iter().map(|n| common::fixture(n)).collect();
    algs.extend(common::corpus().into_iter().take(10));
    for alg in &algs {
        let mut seen: Vec<(HomotopyString, usize)> = Vec::new();
        visit_strings(alg, 4, |w, _| {
            if !w.is_empty() {
                let c = unfold_string(alg, w, 0);
                let total = graded_profile(alg, &c, &c).total();
                let (all, _) = graph_self_hom_bound(alg, w);
                assert!(all <= total, "{}: bound {all} > {total}", w.expr(alg));
                seen.push((w.clone(), total));
            }
            true
        });
        // the robust part bounds every right extension
        for (w, _) in &seen {
            let (_, robust) = graph_self_hom_bound(alg, w);
            for (x, total) in &seen {
                if x.letters.starts_with(&w.letters) {
                    assert!(robust <= *total, "{} extends {} but has Hom {total} < {robust}", x.expr(alg), w.expr(alg));
                }
            }
        }
    }
}
