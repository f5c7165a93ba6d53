//! Cross-module properties on randomized small instances.

use std::sync::Arc;

use proptest::prelude::*;
use proptest::sample::subsequence;

use fsd_core::abelian::enumerate_subgroups;
use fsd_core::boolfn::{
    classify, fwht, graph_fsd_check, transform_graph, BinaryField, LinearizedPolynomial, VectorialFunction,
};
use fsd_core::codes::{formal_dual_codes_check, gray_map, Alphabet, CodeSet};
use fsd_core::duality::{is_formally_dual_pair, quick_dual_pair, quick_self_dual, weight_enumerator};
use fsd_core::evenset::{dual_side_combination, even_decomposition, ss_inverse};
use fsd_core::search::{search_fd_pairs, search_fsd, PairingChoice, SearchSpec};
use fsd_core::{Group, Pairing, SetInGroup};

const SMALL_GROUPS: [&str; 8] = ["Z4", "Z2^2", "Z6", "Z8", "Z2xZ4", "Z9", "Z3^2", "Z2^3"];

fn group_and_pairing() -> impl Strategy<Value = (Group, Pairing)> {
    (0..SMALL_GROUPS.len(), any::<prop::sample::Index>()).prop_map(|(gi, pi)| {
        let g: Group = SMALL_GROUPS[gi].parse().unwrap();
        let all = Pairing::enumerate_nondegenerate(&g).unwrap();
        let p = all[pi.index(all.len())].clone();
        (g, p)
    })
}

fn subset(g: &Group, picks: &[usize]) -> SetInGroup {
    let idx: Vec<usize> = picks.iter().map(|&i| i % g.order()).collect();
    SetInGroup::from_indices(g, idx).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn adjoint_swaps_the_pair(
        (g, p) in group_and_pairing(),
        s in prop::collection::vec(0usize..64, 1..5),
        t in prop::collection::vec(0usize..64, 1..5),
    ) {
        let s = subset(&g, &s);
        let t = subset(&g, &t);
        prop_assert_eq!(quick_dual_pair(&p, &s, &t).unwrap(), quick_dual_pair(&p.adjoint(), &t, &s).unwrap());
    }

    #[test]
    fn translation_preserves_self_duality(
        (g, p) in group_and_pairing(),
        s in prop::collection::vec(0usize..64, 1..4),
        shift in 0usize..64,
    ) {
        let s = subset(&g, &s);
        let t = g.element_at(shift % g.order());
        prop_assert_eq!(quick_self_dual(&p, &s).unwrap(), quick_self_dual(&p, &s.translate(&t)).unwrap());
    }

    #[test]
    fn nu_is_symmetric_with_mass(gi in 0..SMALL_GROUPS.len(), s in prop::collection::vec(0usize..64, 1..8)) {
        let g: Group = SMALL_GROUPS[gi].parse().unwrap();
        let s = subset(&g, &s);
        let nu = weight_enumerator(&s);
        prop_assert_eq!(nu.iter().sum::<u64>(), (s.len() * s.len()) as u64);
        prop_assert_eq!(nu[0], s.len() as u64);
        for i in 0..g.order() {
            prop_assert_eq!(nu[i], nu[g.neg_idx(i)]);
        }
    }

    #[test]
    fn even_decompositions_reexpand(gi in 0..SMALL_GROUPS.len(), s in prop::collection::vec(0usize..64, 1..6)) {
        let g: Group = SMALL_GROUPS[gi].parse().unwrap();
        let s = subset(&g, &s);
        if let Some(mu) = even_decomposition(&s).unwrap() {
            prop_assert_eq!(mu.expand(&g).unwrap(), ss_inverse(&s).unwrap());
        }
    }

    #[test]
    fn fwht_matches_direct_sums_at_larger_degree(n in 7u32..=8, seed in prop::collection::vec(-5i64..6, 256)) {
        let size = 1usize << n;
        let mut buf: Vec<i64> = seed.iter().cycle().take(size).copied().collect();
        let direct: Vec<i64> = (0..size)
            .map(|a| (0..size).map(|x| if (a & x).count_ones() % 2 == 0 { buf[x] } else { -buf[x] }).sum())
            .collect();
        fwht(&mut buf);
        prop_assert_eq!(buf, direct);
    }

    #[test]
    fn classification_is_consistent(n in 2u32..=5, values in prop::collection::vec(0u32..32, 32)) {
        let field = Arc::new(BinaryField::new(n).unwrap());
        let size = field.size();
        let f = VectorialFunction::from_values(field, values.iter().take(size).map(|v| v % size as u32).collect())
            .unwrap();
        let c = classify(&f).unwrap();
        prop_assert!(!c.ab || c.apn);
        // Runs the table criterion and the generic verifier; they must agree.
        graph_fsd_check(&f).unwrap();
    }

    #[test]
    fn gray_map_is_an_isometry(word in prop::collection::vec(0u32..4, 1..8)) {
        let lee: u32 = word.iter().map(|&s| s.min(4 - s)).sum();
        let hamming: u32 = gray_map(&word).iter().sum();
        prop_assert_eq!(lee, hamming);
    }

    #[test]
    fn search_hits_are_sound_and_deterministic((g, p) in group_and_pairing()) {
        let k = (g.order() as f64).sqrt() as usize;
        prop_assume!(k * k == g.order());
        let spec = SearchSpec::new(&g, PairingChoice::Fixed(p.clone()), k);
        let a = search_fsd(&spec).unwrap();
        let b = search_fsd(&spec).unwrap();
        let lits = |r: &fsd_core::search::SearchReport| r.hits.iter().map(|h| h.set.to_string()).collect::<Vec<_>>();
        prop_assert_eq!(lits(&a), lits(&b));
        for h in &a.hits {
            prop_assert!(quick_self_dual(&p, &h.set).unwrap());
            prop_assert!(h.set.contains_idx(0));
        }
    }

    #[test]
    fn random_subsets_of_z3_squared(picks in subsequence((0usize..9).collect::<Vec<_>>(), 3)) {
        let g: Group = "Z3^2".parse().unwrap();
        let s = SetInGroup::from_indices(&g, picks).unwrap();
        let p = Pairing::standard(&g);
        let direct = quick_self_dual(&p, &s).unwrap();
        prop_assert_eq!(direct, is_formally_dual_pair(&p, &s, &s).unwrap().verdict);
    }
}

/// Dual pairs found by search: coset containment of `S` matches the coset
/// structure of `T`, and the `T`-side combination re-expands to `TT^(−1)`.
#[test]
fn dual_pairs_have_matching_coset_structure() {
    for (lit, k) in [("Z4", 2usize), ("Z8", 2), ("Z8", 4), ("Z2xZ4", 2), ("Z9", 3), ("Z3^2", 3), ("Z2^3", 4)] {
        let g: Group = lit.parse().unwrap();
        let p = Pairing::standard(&g);
        let subs = enumerate_subgroups(&g).unwrap();
        let pairs = search_fd_pairs(&SearchSpec::new(&g, PairingChoice::Fixed(p.clone()), k)).unwrap();
        assert!(pairs.complete && !pairs.hits.is_empty(), "{lit} k={k}");
        for h in &pairs.hits {
            for sub in &subs {
                let in_coset = h.s.indices().iter().all(|&x| sub.contains_idx(g.sub_idx(x, h.s.indices()[0])));
                let ann = p.annihilator(sub).unwrap();
                assert_eq!(in_coset, h.t.is_union_of_cosets(&ann), "{lit}: S={} T={} H={}", h.s, h.t, sub.describe());
            }
            if let Some(mu) = even_decomposition(&h.s).unwrap() {
                let dual = dual_side_combination(&p, &h.s, &mu).unwrap();
                assert_eq!(dual.expand(&g).unwrap(), ss_inverse(&h.t).unwrap(), "{lit}: S={} T={}", h.s, h.t);
            }
        }
    }
}

/// Formally dual sets in `F_p^n` under the standard pairing give codes with
/// dual distance enumerators.
#[test]
fn dual_sets_in_prime_fields_have_dual_distance_enumerators() {
    for (lit, p, n, k) in [("Z3^2", 3u32, 2usize, 3usize), ("Z3^2", 3, 2, 1), ("Z5^2", 5, 2, 5), ("Z2^4", 2, 4, 4)] {
        let g: Group = lit.parse().unwrap();
        let pairing = Pairing::standard(&g);
        let pairs = search_fd_pairs(&SearchSpec::new(&g, PairingChoice::Fixed(pairing), k)).unwrap();
        assert!(!pairs.hits.is_empty());
        let code = |s: &SetInGroup| {
            let words = s.members().iter().map(|e| e.0.iter().map(|&c| c as i64).collect()).collect();
            CodeSet::new(Alphabet::Prime(p), n, words).unwrap()
        };
        for h in &pairs.hits {
            assert!(formal_dual_codes_check(&code(&h.s), &code(&h.t)).unwrap().distance_dual, "{} / {}", h.s, h.t);
        }
    }
}

/// Linearized maps whose adjoints invert them carry the self dual graph of
/// `x^3` over `F_8` to self dual graphs.
#[test]
fn self_dual_linear_maps_preserve_graph_self_duality() {
    let field = Arc::new(BinaryField::with_poly(3, 0b1011).unwrap());
    let f = VectorialFunction::monomial(field.clone(), 3);
    let mut maps = Vec::new();
    for c0 in 0..8 {
        for c1 in 0..8 {
            for c2 in 0..8 {
                let l = LinearizedPolynomial::new(field.clone(), &[c0, c1, c2]).unwrap();
                if l.is_invertible() && l.selfdual_condition() {
                    maps.push(l);
                }
            }
        }
    }
    assert!(maps.len() > 1);
    for l1 in &maps {
        for l2 in maps.iter().step_by(3) {
            let g = transform_graph(&f, l1, l2).unwrap();
            assert!(graph_fsd_check(&g).unwrap().verdict, "L1={l1} L2={l2}");
        }
    }
}
