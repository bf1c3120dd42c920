//! Randomized invariants over permutation groups of small degree.

use engelhaar::automorphism::{Automorphism, SemidirectExtension};
use engelhaar::haar::{self, average_lambda, klarge_certificate, Strategy as Search};
use engelhaar::subgroup::{generate_subgroup, normal_core};
use engelhaar::words::{coset_witness, inverted_set, splitting_set, torsion_set};
use engelhaar::{FiniteGroup, GroupFunction64, Measure, Subset};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn permutation(degree: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..degree).collect::<Vec<_>>()).prop_shuffle()
}

/// A permutation group of degree 2..=5 from one to three random generators.
fn group() -> impl Strategy<Value = FiniteGroup> {
    (2usize..=5)
        .prop_flat_map(|d| (Just(d), prop::collection::vec(permutation(d), 1..=3)))
        .prop_map(|(d, gens)| FiniteGroup::from_permutations(d, &gens, 1000, "P").unwrap())
}

fn group_and_masks(count: usize) -> impl Strategy<Value = (FiniteGroup, Vec<Vec<bool>>)> {
    group().prop_flat_map(move |g| {
        let n = g.order();
        (
            Just(g),
            prop::collection::vec(prop::collection::vec(any::<bool>(), n), count),
        )
    })
}

fn subset<'g>(g: &'g FiniteGroup, mask: &[bool]) -> Subset<'g> {
    Subset::from_predicate(g, |x| mask[x])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn axioms_and_lagrange(g in group()) {
        let e = g.identity();
        for x in g.elements() {
            prop_assert_eq!(g.mul(x, g.inv(x)), e);
            prop_assert_eq!(g.order() % g.element_order(x), 0);
            prop_assert_eq!(g.power(x, g.order() as i64), e);
            for y in g.elements() {
                prop_assert_eq!(g.inv(g.mul(x, y)), g.mul(g.inv(y), g.inv(x)));
            }
        }
    }

    #[test]
    fn generated_subgroups_and_cores(g in group(), picks in prop::collection::vec(any::<prop::sample::Index>(), 0..3)) {
        let gens: Vec<usize> = picks.iter().map(|i| i.index(g.order())).collect();
        let h = generate_subgroup(&g, &gens);
        prop_assert_eq!(g.order() % h.order(), 0);
        prop_assert!(gens.iter().all(|&x| h.contains(x)));
        for &a in h.members() {
            for &b in h.members() {
                prop_assert!(h.contains(g.mul(a, g.inv(b))));
            }
        }
        let k = normal_core(&h);
        prop_assert!(k.is_normal() && k.is_subgroup_of(&h));
        for t in g.elements() {
            prop_assert!(k.is_subgroup_of(&h.conjugate(t)));
        }
    }

    #[test]
    fn fubini_average_equals_product((g, masks) in group_and_masks(2)) {
        let sets: Vec<Subset<'_>> = masks.iter().map(|m| subset(&g, m)).collect();
        let r = average_lambda(&sets, haar::DEFAULT_TUPLE_BUDGET).unwrap();
        let n = g.order() as u64;
        prop_assert_eq!(r.average, Measure::new(sets[0].len() as u64 * sets[1].len() as u64, n * n));
        prop_assert!(r.holds());
    }

    #[test]
    fn lambda_is_monotone_and_translation_invariant((g, masks) in group_and_masks(2), x in any::<prop::sample::Index>()) {
        let (a, b) = (subset(&g, &masks[0]), subset(&g, &masks[1]));
        let x = x.index(g.order());
        let e = g.identity();
        let ab = haar::lambda_intersection(&[a.clone(), b.clone()], &[e, e]).unwrap();
        prop_assert!(ab <= a.measure() && ab <= b.measure());
        let shifted = haar::lambda_intersection(&[a.clone(), b.clone()], &[x, x]).unwrap();
        prop_assert_eq!(ab, shifted);
    }

    #[test]
    fn lipschitz_bound(g in group(), seed in any::<u64>(), k in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fs: Vec<GroupFunction64<'_>> = (0..k).map(|_| GroupFunction64::random(&g, &mut rng)).collect();
        let n = g.order();
        let xs: Vec<usize> = (0..k).map(|i| (seed as usize).wrapping_add(i) % n).collect();
        let ys: Vec<usize> = (0..k).map(|i| (seed as usize >> 7).wrapping_mul(i + 1) % n).collect();
        let check = haar::lipschitz_check(&fs, &xs, &ys).unwrap();
        prop_assert!(check.holds(), "{:?}", check);
        let p = haar::psi(&fs, &xs).unwrap();
        prop_assert!(p.norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn klarge_certificates_verify((g, masks) in group_and_masks(1), k in 1usize..=3) {
        let a = subset(&g, &masks[0]);
        prop_assume!(!a.is_empty());
        let c = klarge_certificate(&a, k, Search::Greedy, 10_000_000).unwrap();
        prop_assert!(c.witness_set.contains(g.identity()));
        prop_assert!(c.witness_set.is_symmetric());
        prop_assert!(c.verify(10_000_000).unwrap());
    }

    #[test]
    fn coset_witness_lies_in_target(g in group(), n in 1usize..=4) {
        let x = torsion_set(&g, n);
        let w = coset_witness(&x, 10_000_000).unwrap();
        prop_assert!(w.verify(&x.set));
        prop_assert!(w.subgroup.order() <= x.set.len());
    }

    #[test]
    fn inner_automorphism_sets(g in group(), t in any::<prop::sample::Index>()) {
        let t = t.index(g.order());
        let alpha = Automorphism::inner(&g, t).unwrap();
        let inv = inverted_set(&alpha);
        prop_assert!(inv.set.is_symmetric() && inv.set.contains(g.identity()));
        if 3 % alpha.order() == 0 {
            let x = splitting_set(&alpha).unwrap();
            let ext = SemidirectExtension::new(&alpha).unwrap();
            let big = ext.group();
            for a in g.elements() {
                prop_assert_eq!(big.power(ext.pair(a, 1), 3) == big.identity(), x.set.contains(a));
            }
        }
    }
}
