mod common;

use common::fixture;
use gentle_core::complexes::{stalk_projective, string_unfolding};
use gentle_core::exceptional::{mouth_objects_with, serre_image, SerreTarget};
use gentle_core::hom::{hom_k_dim_shifted, is_null_homotopic, iso_up_to_shift, profile_window};
use gentle_core::prelude::*;
use gentle_core::words::{canonical_band, canonical_string, parse_band, parse_string};

fn labels(alg: &GentleAlgebra, ts: &[Thread], keep: impl Fn(usize) -> bool) -> Vec<String> {
    let mut v: Vec<String> = ts.iter().enumerate().filter(|(i, _)| keep(*i)).map(|(_, t)| t.label(alg)).collect();
    v.sort();
    v
}

#[test]
fn pent_threads() {
    let alg = fixture("pent");
    let t = enumerate_threads(&alg).unwrap();
    assert_eq!(labels(&alg, &t.permitted, |_| true), ["af", "b", "dc", "e"]);
    assert_eq!(
        labels(&alg, &t.forbidden, |_| true),
        ["1_1", "1_2", "1_3", "1_4", "acb", "bac", "cba", "dfe", "edf", "fed"]
    );
    assert_eq!(labels(&alg, &t.forbidden, |i| t.critical[i]), ["acb", "bac", "cba", "dfe", "edf", "fed"]);
    // the matchings pair permitted threads with the non-critical forbidden ones
    assert_eq!(t.permitted.len(), t.non_critical_forbidden().count());
    assert_eq!(detect_critical_cycles(&alg).len(), 2);
    let cycles = aag_cycles(&t).unwrap();
    assert_eq!(cycles.len(), 1);
    assert_eq!((cycles[0].n, cycles[0].m), (4, 0));
    assert_eq!(labels(&alg, &t.permitted, |i| cycles[0].permitted.contains(&i)), ["af", "b", "dc", "e"]);
}

#[test]
fn kronecker_threads_and_cycles() {
    let alg = fixture("kronecker");
    let t = enumerate_threads(&alg).unwrap();
    let cycles = aag_cycles(&t).unwrap();
    assert_eq!(cycles.iter().map(|c| (c.n, c.m)).collect::<Vec<_>>(), [(1, 1), (1, 1)]);
    for c in &cycles {
        // each arrow is matched with the other one and back
        let p = &t.permitted[c.permitted[0]];
        let f = &t.forbidden[c.forbidden[0]];
        assert_ne!(p.label(&alg), f.label(&alg));
    }
    assert!(detect_critical_cycles(&fixture("a3_hereditary")).is_empty());
}

#[test]
fn mouth_object_counts() {
    for (name, count) in [("dual_numbers", 1), ("kronecker", 2), ("pent", 4), ("a2", 3)] {
        let alg = fixture(name);
        let objects = mouth_objects(&alg).unwrap();
        assert_eq!(objects.len(), count, "{name}");
        assert!(objects.iter().all(|o| o.flag.is_none()), "{name}");
    }
    let dual = fixture("dual_numbers");
    let objects = mouth_objects(&dual).unwrap();
    assert_eq!(objects[0].word, HomotopyString::trivial(0, objects[0].word.trivial.unwrap().1));
    assert_eq!(objects[0].profiles[0].get(0), 2);
}

#[test]
fn a2_serre_targets() {
    let alg = fixture("a2");
    let (tables, objects) = mouth_objects_with(&alg, Parallelism::Sequential).unwrap();
    let find = |label: &str| objects.iter().position(|o| o.label == label).unwrap();
    let (p1, p2, a) = (find("1_1"), find("1_2"), find("a"));
    // the trivial threads sit over the stalks P(1) and P(2)
    let stalk = |v: &str| stalk_projective(&alg, alg.presentation().vertex_id(v).unwrap(), 0);
    assert_eq!(iso_up_to_shift(&alg, &objects[p1].complex, &stalk("1")), Some(0));
    assert_eq!(iso_up_to_shift(&alg, &objects[p2].complex, &stalk("2")), Some(0));
    assert_eq!(serre_of_mouth(&alg, &tables, &objects, p2).unwrap(), SerreTarget { object: p1, shift: 0 });
    assert_eq!(serre_of_mouth(&alg, &tables, &objects, a).unwrap(), SerreTarget { object: p2, shift: 1 });
}

#[test]
fn dual_numbers_serre_fixes_the_stalk() {
    let alg = fixture("dual_numbers");
    let (tables, objects) = mouth_objects_with(&alg, Parallelism::Sequential).unwrap();
    assert_eq!(serre_of_mouth(&alg, &tables, &objects, 0).unwrap(), SerreTarget { object: 0, shift: 0 });
    let orbits = ag_invariants(&alg).unwrap();
    assert_eq!(orbits.iter().map(|o| (o.n, o.m)).collect::<Vec<_>>(), [(1, 0)]);
}

/// `Hom(X, Y[t])` and `Hom(Y[t], nu X)` have the same dimension; the second
/// is computed into the complex of injectives directly.
#[test]
fn serre_duality_on_mouth_objects() {
    let mut algs: Vec<GentleAlgebra> = ["a2", "kronecker", "pent", "dual_numbers", "a3_relation"].iter().map(|n| fixture(n)).collect();
    algs.extend(common::corpus().into_iter().take(15));
    for alg in &algs {
        let objects = mouth_objects(alg).unwrap();
        for x in &objects {
            let nu = nakayama_on_projectives(alg, &x.complex).unwrap();
            for y in &objects {
                let (lo, hi) = profile_window(&x.complex, &y.complex).unwrap();
                for t in lo - 1..=hi + 1 {
                    let yt = shift(&y.complex, t);
                    let lhs = hom_k_dim_shifted(alg, &x.complex, &y.complex, t);
                    let rhs = hom_k_dim(alg, &yt, &nu);
                    assert_eq!(lhs, rhs, "{} -> {}[{t}] in {}", x.label, y.label, alg.name());
                }
            }
        }
    }
}

#[test]
fn serre_image_is_a_minimal_projective_model() {
    for name in ["a2", "kronecker", "pent", "a3_hereditary"] {
        let alg = fixture(name);
        for x in mouth_objects(&alg).unwrap() {
            let nu = nakayama_on_projectives(&alg, &x.complex).unwrap();
            let s = serre_image(&alg, &x.complex).unwrap();
            assert!(s.proj.is_some());
            assert!(s.is_complex(&alg));
            assert_eq!(s.cohomology_dims(&alg), nu.cohomology_dims(&alg), "{name} {}", x.label);
        }
    }
}

#[test]
fn pent_stalk_single_map() {
    let alg = fixture("pent");
    let v = parse_string(&alg, "triv:1:+1").unwrap();
    let w = parse_string(&alg, "triv:3:+1").unwrap();
    let maps = single_maps(&alg, &v, 0, &w, 0);
    assert_eq!(maps.len(), 1);
    assert_eq!(alg.path_name(maps[0].components[0].2), "a*f");
    let dual = fixture("dual_numbers");
    let a = parse_string(&dual, "triv:1:+1").unwrap();
    assert_eq!(single_maps(&dual, &a, 0, &a, 0).len(), 1);
}

#[test]
fn double_maps_between_forbidden_threads_are_null_homotopic() {
    let mut algs: Vec<GentleAlgebra> = common::FIXTURES.iter().map(|n| fixture(n)).collect();
    algs.extend(common::corpus().into_iter().take(15));
    let mut seen = 0;
    for alg in &algs {
        let t = enumerate_threads(alg).unwrap();
        let words: Vec<HomotopyString> = t.forbidden.iter().map(|f| f.as_string(alg)).collect();
        for v in &words {
            let x = unfold_string(alg, v, 0);
            let (xl, xh) = x.support().unwrap();
            for w in &words {
                let uw = string_unfolding(alg, w, 0);
                let (yl, yh) = (*uw.degrees.iter().min().unwrap(), *uw.degrees.iter().max().unwrap());
                for mw in (xl - yh)..=(xh - yl) {
                    let y = unfold_string(alg, w, mw);
                    for m in double_maps(alg, v, 0, w, mw) {
                        let vec = gentle_core::alp::chain_vector(alg, v, 0, w, mw, &m);
                        assert!(is_null_homotopic(alg, &x, &y, 0, &vec), "{m:?} in {}", alg.name());
                        seen += 1;
                    }
                }
            }
        }
    }
    assert!(seen > 0);
}

#[test]
fn words_and_keys() {
    let dual = fixture("dual_numbers");
    let xx = parse_string(&dual, "x, x").unwrap();
    assert_eq!(xx.len(), 2);
    assert_eq!(xx.degree().abs(), 2);
    let c = unfold_string(&dual, &xx, 0);
    assert_eq!(c.support(), Some((-2, 0)));
    assert!(c.is_complex(&dual));

    let pent = fixture("pent");
    let cba = parse_string(&pent, "c, b, a").unwrap();
    let fed = parse_string(&pent, "f, e, d").unwrap();
    assert_ne!(canonical_string(&cba), canonical_string(&fed));
    assert_eq!(canonical_string(&cba), canonical_string(&cba.inverse()));

    let kr = fixture("kronecker");
    let band = parse_band(&kr, "b^-1, a").unwrap();
    assert_eq!(band.len(), 2);
    let rotated = parse_band(&kr, "a, b^-1").unwrap();
    assert_eq!(canonical_band(&band), canonical_band(&rotated));
    assert_eq!(canonical_band(&band), canonical_band(&band.inverse()));
    let pent_band = parse_band(&pent, "d^-1, e^-1, f^-1, c, b, a").unwrap();
    assert_eq!(pent_band.len(), 6);
    assert_ne!(canonical_band(&band), canonical_band(&pent_band));
    let e = unfold_band(&pent, &pent_band, 0, Q::from_integer(1)).unwrap();
    assert!(e.is_complex(&pent));
    assert!(unfold_band(&kr, &band, 0, Q::from_integer(0)).is_err());
}

#[test]
fn string_and_inverse_are_isomorphic() {
    let alg = fixture("pent");
    for w in gentle_core::words::enumerate_strings(&alg, 3) {
        let expr = w.expr(&alg);
        let x = unfold_string(&alg, &w, 0);
        let y = unfold_string(&alg, &w.inverse(), 0);
        assert!(iso_indecomposable(&alg, &x, &y), "{expr}");
        assert!(iso_indecomposable(&alg, &x, &shift(&x, 0)));
    }
    let a2 = fixture("a2");
    let p1 = stalk_projective(&a2, 0, 0);
    let p2 = stalk_projective(&a2, 1, 0);
    assert!(!iso_indecomposable(&a2, &p1, &p2));
}

#[test]
fn dropping_an_entry_breaks_the_links() {
    for name in ["pent", "a2", "a3_relation"] {
        let alg = fixture(name);
        for cycle in classify_exceptional_cycles(&alg, Parallelism::Sequential).unwrap() {
            if cycle.len() < 3 {
                continue;
            }
            let mut entries = cycle.entries.clone();
            entries.remove(1);
            assert!(!verify_cycle(&alg, &entries).unwrap().e2, "{name}");
            // rotations and entrywise shifts are the same class
            let mut rotated = cycle.clone();
            rotated.entries.rotate_left(1);
            for e in rotated.entries.iter_mut() {
                e.shift += 3;
            }
            assert!(cycle_equiv(&cycle, &rotated));
        }
    }
}

#[test]
fn fixture_cycles_match_the_known_lists() {
    let pent = fixture("pent");
    let cycles = classify_exceptional_cycles(&pent, Parallelism::Sequential).unwrap();
    assert_eq!(cycles.len(), 1);
    assert_eq!(cycles[0].len(), 4);
    assert!(cycles[0].entries.iter().all(|e| matches!(&e.object, gentle_core::exceptional::CycleObject::String(w) if w.is_empty())));

    let dual = fixture("dual_numbers");
    let cycles = classify_exceptional_cycles(&dual, Parallelism::Sequential).unwrap();
    assert_eq!(cycles.len(), 1);
    assert_eq!(cycles[0].len(), 1);
    assert_eq!(cycles[0].calabi_yau, Some(0));

    let kr = fixture("kronecker");
    let cycles = classify_exceptional_cycles(&kr, Parallelism::Sequential).unwrap();
    assert_eq!(cycles.iter().map(|c| (c.len(), c.calabi_yau)).collect::<Vec<_>>(), [(1, Some(1)), (1, Some(1))]);

    for name in ["a3_relation", "a3_hereditary"] {
        let mut lens: Vec<usize> = classify_exceptional_cycles(&fixture(name), Parallelism::Sequential).unwrap().iter().map(|c| c.len()).collect();
        lens.sort();
        assert_eq!(lens, [2, 4], "{name}");
    }
}

#[test]
fn a3_relation_search_at_small_bounds() {
    let alg = fixture("a3_relation");
    let found = brute_force_search(&alg, SearchBounds { max_letters: 3, shift_window: 4 }, Parallelism::Sequential).unwrap();
    let mut lens: Vec<usize> = found.iter().map(|c| c.len()).collect();
    lens.sort();
    assert_eq!(lens, [2, 4]);
}
