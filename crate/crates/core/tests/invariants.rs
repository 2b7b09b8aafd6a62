mod common;

use gentle_core::alp::{alp_basis, chain_vector};
use gentle_core::complexes::stalk;
use gentle_core::hom::{chain_map_space_shifted, is_chain_map};
use gentle_core::prelude::*;
use gentle_core::random::relabel;
use gentle_core::words::enumerate_strings;
use proptest::prelude::*;
use proptest::sample::Index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;

fn corpus() -> &'static [GentleAlgebra] {
    static CORPUS: OnceLock<Vec<GentleAlgebra>> = OnceLock::new();
    CORPUS.get_or_init(common::corpus)
}

fn invariants(alg: &GentleAlgebra) -> Vec<(usize, i32)> {
    let mut v: Vec<(usize, i32)> = ag_invariants(alg).unwrap().iter().map(|o| (o.n, o.m)).collect();
    v.sort();
    v
}

fn cycle_lengths(alg: &GentleAlgebra) -> Vec<usize> {
    let mut v: Vec<usize> = classify_exceptional_cycles(alg, Parallelism::Sequential).unwrap().iter().map(|c| c.len()).collect();
    v.sort();
    v
}

fn pick_string(alg: &GentleAlgebra, max_letters: usize, i: Index) -> HomotopyString {
    let words = enumerate_strings(alg, max_letters);
    words[i.index(words.len())].clone()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn invariants_do_not_depend_on_the_sign_assignment(a in 0usize..50, s in any::<Index>()) {
        let alg = &corpus()[a];
        let all = enumerate_sign_assignments(alg);
        let other = alg.with_signs(all[s.index(all.len())].clone()).unwrap();
        prop_assert_eq!(invariants(alg), invariants(&other));
        prop_assert_eq!(cycle_lengths(alg), cycle_lengths(&other));
    }

    #[test]
    fn invariants_survive_relabelling(a in 0usize..50, seed in any::<u64>()) {
        let alg = &corpus()[a];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let other = validate_gentle(&relabel(&mut rng, alg.presentation())).unwrap();
        prop_assert_eq!(alg.dim(), other.dim());
        prop_assert_eq!(invariants(alg), invariants(&other));
    }

    #[test]
    fn hom_is_shift_equivariant(a in 0usize..50, i in any::<Index>(), j in any::<Index>(), s in -3i32..=3, t in -4i32..=4) {
        let alg = &corpus()[a];
        let x = unfold_string(alg, &pick_string(alg, 4, i), 0);
        let y = unfold_string(alg, &pick_string(alg, 4, j), 0);
        let base = hom_k_dim_shifted(alg, &x, &y, t);
        prop_assert_eq!(base, hom_k_dim_shifted(alg, &shift(&x, s), &shift(&y, s), t));
        prop_assert_eq!(base, hom_k_dim(alg, &x, &shift(&y, t)));
        prop_assert_eq!(base, hom_k_dim_shifted(alg, &shift(&x, -t), &y, 0));
    }

    #[test]
    fn string_complexes_square_to_zero(a in 0usize..50, i in any::<Index>(), m in -3i32..=3) {
        let alg = &corpus()[a];
        let c = unfold_string(alg, &pick_string(alg, 6, i), m);
        prop_assert!(c.is_complex(alg));
        prop_assert_eq!(c.support().unwrap().1, m);
        prop_assert!(shift(&c, 2).is_complex(alg));
    }

    #[test]
    fn band_complexes_square_to_zero(num in -5i128..=5, den in 1i128..=4) {
        prop_assume!(num != 0);
        let mu = Q::new(num, den);
        for (name, expr) in [("kronecker", "b^-1, a"), ("pent", "d^-1, e^-1, f^-1, c, b, a")] {
            let alg = common::fixture(name);
            let band = gentle_core::words::parse_band(&alg, expr).unwrap();
            prop_assert!(unfold_band(&alg, &band, 0, mu).unwrap().is_complex(&alg));
        }
    }

    #[test]
    fn perfect_replacement_keeps_cohomology(a in 0usize..50, i in any::<Index>(), v in any::<Index>()) {
        let alg = &corpus()[a];
        let x = unfold_string(alg, &pick_string(alg, 4, i), 0);
        let nu = nakayama_on_projectives(alg, &x).unwrap();
        let p = perfect_replacement(alg, &nu).unwrap();
        prop_assert!(p.proj.is_some());
        prop_assert_eq!(p.cohomology_dims(alg), nu.cohomology_dims(alg));
        let s = stalk(injective(alg, v.index(alg.num_vertices())), 1);
        let ps = perfect_replacement(alg, &s).unwrap();
        prop_assert_eq!(ps.cohomology_dims(alg), s.cohomology_dims(alg));
    }

    #[test]
    fn combinatorial_basis_on_short_strings(a in 0usize..50, i in any::<Index>(), j in any::<Index>(), mw in -3i32..=3) {
        let alg = &corpus()[a];
        let v = pick_string(alg, 3, i);
        let w = pick_string(alg, 3, j);
        let x = unfold_string(alg, &v, 0);
        let y = unfold_string(alg, &w, mw);
        let basis = alp_basis(alg, &v, 0, &w, mw);
        prop_assert_eq!(basis.len(), chain_map_space_shifted(alg, &x, &y, 0).dim(), "{} -> {}@{}", v.expr(alg), w.expr(alg), mw);
        for m in &basis {
            prop_assert!(is_chain_map(alg, &x, &y, 0, &chain_vector(alg, &v, 0, &w, mw, m)));
        }
    }
}

#[test]
fn sequential_and_parallel_agree() {
    for alg in corpus().iter().take(20) {
        let seq = classify_exceptional_cycles(alg, Parallelism::Sequential).unwrap();
        let par = classify_exceptional_cycles(alg, Parallelism::Parallel).unwrap();
        assert_eq!(seq, par, "{}", alg.name());
    }
}
