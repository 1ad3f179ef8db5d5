//! Randomised cross-checks between modules. Instances are built from a proptest
//! seed so every failure replays from the printed seed.

mod common;

use common::*;
use num_traits::ToPrimitive;
use packlab::cover::{untwist, Cover};
use packlab::derange::{
    bad_permutations, bad_permutations_direct, check_five_pairs, common_derangements, common_derangements_by_enumeration,
    permanent,
};
use packlab::frac::{check_monotonicity, has_fractional_packing, is_fractionally_packable, uniform_from_packing};
use packlab::graph::{degeneracy, girth, mad, mad_brute_force};
use packlab::packing::{count_transversals, find_packing};
use packlab::perm::Perm;
use proptest::prelude::*;
use rand::Rng;

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(cfg(1000))]

    #[test]
    fn permanent_matches_brute_force(n in 1usize..=6, seed in any::<u64>(), density in 0.3f64..0.95) {
        let g = random_bipartite(&mut rng(seed), n, density);
        prop_assert_eq!(permanent(&g).unwrap(), brute_permanent(&g));
    }

    #[test]
    fn common_derangement_paths_agree(k in 2usize..=7, rows in 1usize..=4, seed in any::<u64>()) {
        let mut r = rng(seed);
        let perms: Vec<Perm> = (0..rows).map(|_| random_perm(&mut r, k)).collect();
        prop_assert_eq!(common_derangements(&perms).unwrap(), common_derangements_by_enumeration(&perms).unwrap());
    }

    #[test]
    fn common_derangements_conjugation_invariant(k in 2usize..=8, rows in 1usize..=5, seed in any::<u64>()) {
        let mut r = rng(seed);
        let perms: Vec<Perm> = (0..rows).map(|_| random_perm(&mut r, k)).collect();
        let g = random_perm(&mut r, k);
        let conj: Vec<Perm> = perms.iter().map(|p| p.conjugate_by(&g)).collect();
        prop_assert_eq!(common_derangements(&perms).unwrap(), common_derangements(&conj).unwrap());
    }

    #[test]
    fn packing_gives_feasible_uniform_distribution(n in 2usize..=5, k in 2usize..=3, seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = random_full_cover(&mut r, n, k, 0.5);
        if let Some(p) = find_packing(&c).unwrap() {
            prop_assert!(p.validate(&c));
            prop_assert!(uniform_from_packing(&p).validate(&c));
            prop_assert!(has_fractional_packing(&c).unwrap().is_feasible());
            prop_assert!(count_transversals(&c) >= k as u128);
            // Deleting a matching edge keeps the packing valid.
            if let Some(&(u, v)) = c.base().edges().first() {
                let smaller = c.without_matching_edge(u, r.gen_range(0..k), v);
                prop_assert!(p.validate(&smaller));
            }
        }
    }

    #[test]
    fn untwist_preserves_counts_and_feasibility(n in 2usize..=6, k in 2usize..=3, seed in any::<u64>()) {
        let c = random_full_cover(&mut rng(seed), n, k, 0.6);
        let (u, _) = untwist(&c, &c.base().spanning_forest()).unwrap();
        prop_assert_eq!(count_transversals(&c), count_transversals(&u));
        prop_assert_eq!(is_fractionally_packable(&c).unwrap(), is_fractionally_packable(&u).unwrap());
    }

    #[test]
    fn larger_lists_keep_fractional_packings(n in 2usize..=5, seed in any::<u64>(), added in 1usize..=2) {
        let mut r = rng(seed);
        let c = random_partial_cover(&mut r, n);
        if is_fractionally_packable(&c).unwrap() {
            let v = r.gen_range(0..n);
            prop_assert!(check_monotonicity(&c, v, added).unwrap());
        }
    }

    #[test]
    fn five_pairs_under_hypotheses(seed in any::<u64>(), extra in 0usize..=8) {
        let (g, pairs) = five_pair_instance(&mut rng(seed), extra);
        prop_assert!(g.min_degree() >= 3);
        if permanent(&g).unwrap() > 24 {
            prop_assert_eq!(check_five_pairs(&g, &pairs), Ok(true));
        }
    }

    #[test]
    fn graph_density_bounds(n in 1usize..=8, seed in any::<u64>(), p in 0.1f64..0.9) {
        let g = random_graph(&mut rng(seed), n, p);
        let m = mad(&g).unwrap();
        prop_assert_eq!(&m.value, &mad_brute_force(&g));
        let (d, _) = degeneracy(&g);
        prop_assert!(d <= g.max_degree());
        prop_assert!(m.value.to_f64().unwrap() / 2.0 <= d as f64 + 1e-9);
        prop_assert!(d <= m.value.floor().to_integer().to_usize().unwrap());
        if let Some(len) = girth(&g) {
            prop_assert!(len >= 3 && len <= n);
        }
    }

    #[test]
    fn cover_json_round_trip(n in 1usize..=6, seed in any::<u64>()) {
        let c = random_partial_cover(&mut rng(seed), n);
        prop_assert_eq!(Cover::from_json(&c.to_json()).unwrap(), c);
    }

    #[test]
    fn bad_rows_two_ways(seed in any::<u64>()) {
        let a = sample_matrix(&mut rng(seed));
        let fast: Vec<Perm> = bad_permutations(&a).unwrap().bad.into_iter().map(|b| b.perm).collect();
        prop_assert_eq!(fast, bad_permutations_direct(&a).unwrap());
    }
}
