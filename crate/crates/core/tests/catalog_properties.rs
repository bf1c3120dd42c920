//! Properties checked over every bundled group.

use engelhaar::automorphism::{Automorphism, SemidirectExtension};
use engelhaar::catalog::Catalog;
use engelhaar::engel::{self, DEFAULT_TRIPLE_CAP};
use engelhaar::subgroup::{generate_subgroup, normal_core, Subgroup};
use engelhaar::words::{
    self, abelian_subgroup_extract, commuting_certificate, coset_witness, engel_pair_certificate,
    engel_subgroup_extract, inverted_set, splitting_set, torsion_set, ExtractOptions, Mode,
};
use engelhaar::Measure;

fn automorphisms(entry: &engelhaar::catalog::CatalogEntry) -> Vec<Automorphism<'_>> {
    entry
        .automorphism_names()
        .into_iter()
        .map(|n| entry.automorphism(n).unwrap())
        .collect()
}

#[test]
fn group_axioms_and_inverse_of_products() {
    let c = Catalog::bundled();
    for e in &c.entries {
        let g = &e.group;
        for x in g.elements() {
            assert_eq!(g.mul(g.identity(), x), x);
            assert_eq!(g.mul(x, g.inv(x)), g.identity());
        }
        if g.order() <= 32 {
            for x in g.elements() {
                for y in g.elements() {
                    assert_eq!(g.inv(g.mul(x, y)), g.mul(g.inv(y), g.inv(x)));
                }
            }
        }
    }
}

#[test]
fn splitting_with_identity_is_cube_torsion() {
    let c = Catalog::bundled();
    for e in &c.entries {
        let id = Automorphism::identity(&e.group);
        assert_eq!(
            splitting_set(&id).unwrap().set,
            torsion_set(&e.group, 3).set,
            "{}",
            e.label()
        );
        assert_eq!(inverted_set(&id).set, torsion_set(&e.group, 2).set);
    }
}

#[test]
fn splitting_set_matches_semidirect_cubes_and_rotations() {
    let c = Catalog::bundled();
    let mut instances = 0;
    for e in c.entries.iter().filter(|e| e.group.order() <= 48) {
        let g = &e.group;
        for alpha in automorphisms(e).into_iter().filter(|a| 3 % a.order() == 0) {
            instances += 1;
            let x = splitting_set(&alpha).unwrap();
            let ext = SemidirectExtension::new(&alpha).unwrap();
            let big = ext.group();
            for a in g.elements() {
                let cube = big.power(ext.pair(a, 1), 3);
                assert_eq!(
                    cube == big.identity(),
                    x.set.contains(a),
                    "{} {a}",
                    e.label()
                );
                if x.set.contains(a) {
                    let (a1, a2) = (alpha.apply(a), alpha.apply_pow(a, 2));
                    assert_eq!(g.mul(g.mul(a, a2), a1), g.identity());
                    assert_eq!(g.mul(g.mul(a1, a), a2), g.identity());
                }
            }
        }
    }
    assert!(instances > 20);
}

#[test]
fn inverted_sets_are_inverse_closed() {
    let c = Catalog::bundled();
    for e in &c.entries {
        for alpha in automorphisms(e) {
            let x = inverted_set(&alpha);
            assert!(x.set.contains(e.group.identity()));
            assert!(x.set.is_symmetric());
        }
    }
}

#[test]
fn commuting_certificates_are_sound() {
    let c = Catalog::bundled();
    for e in c.entries.iter().filter(|e| e.group.order() <= 27) {
        for alpha in automorphisms(e) {
            let x = inverted_set(&alpha);
            for a in e.group.elements() {
                for b in e.group.elements() {
                    let cert = commuting_certificate(&x, a, b).unwrap();
                    if cert.witness.is_some() {
                        assert!(cert.law_holds, "{} a={a} b={b}", e.label());
                    }
                }
            }
        }
    }
}

#[test]
fn engel_certificates_are_sound() {
    let c = Catalog::bundled();
    let mut witnessed = 0;
    for e in c.entries.iter().filter(|e| e.group.order() <= 27) {
        for alpha in automorphisms(e).into_iter().filter(|a| 3 % a.order() == 0) {
            let x = splitting_set(&alpha).unwrap();
            for a in e.group.elements() {
                for b in e.group.elements() {
                    let cert = engel_pair_certificate(&x, a, b).unwrap();
                    if cert.witness.is_some() {
                        witnessed += 1;
                        assert!(cert.law_holds, "{} a={a} b={b}", e.label());
                    }
                }
            }
        }
    }
    assert!(witnessed > 0);
}

#[test]
fn coset_witnesses_revalidate() {
    let c = Catalog::bundled();
    for e in c.entries.iter().filter(|e| e.group.order() <= 27) {
        for n in 1..=4 {
            let x = torsion_set(&e.group, n);
            let w = coset_witness(&x, 10_000_000).unwrap();
            assert!(w.verify(&x.set), "{} n={n}", e.label());
            assert!(w.exhaustive);
        }
    }
}

#[test]
fn coset_witness_is_maximal_against_brute_force() {
    let c = Catalog::bundled();
    for label in ["S3", "D8", "Q8", "Z6", "S4"] {
        let g = &c.entry(label).unwrap().group;
        let subgroups = engelhaar::subgroup::all_subgroups(g, 10_000_000).unwrap();
        for n in 2..=4 {
            let x = torsion_set(g, n);
            let best = subgroups
                .iter()
                .filter(|h| {
                    g.elements()
                        .any(|t| h.members().iter().all(|&m| x.set.contains(g.mul(t, m))))
                })
                .map(Subgroup::order)
                .max()
                .unwrap();
            assert_eq!(
                coset_witness(&x, 10_000_000).unwrap().subgroup.order(),
                best,
                "{label} n={n}"
            );
        }
    }
}

#[test]
fn extraction_reports_revalidate() {
    let c = Catalog::bundled();
    for e in c.entries.iter().filter(|e| e.group.order() <= 48) {
        for alpha in automorphisms(e) {
            let opts = ExtractOptions::default();
            let (r, slice) = abelian_subgroup_extract(&alpha, &opts).unwrap();
            assert!(r.verify() && r.normal && r.law_holds, "{}", e.label());
            let proof = r.proof.as_ref().unwrap();
            assert!(proof.core.order() <= r.direct.as_ref().unwrap().order());
            assert!(proof.generated.is_abelian());
            assert!(slice.inside_target);
            if 3 % alpha.order() == 0 {
                let r = engel_subgroup_extract(&alpha, &opts).unwrap();
                assert!(r.verify(), "{}", e.label());
                let proof = r.proof.as_ref().unwrap();
                assert!(proof.core.order() <= r.direct.as_ref().unwrap().order());
                assert!(engel::is_2engel(&proof.generated).holds());
            }
        }
    }
}

#[test]
fn dihedral_abelian_extraction() {
    let c = Catalog::bundled();
    let g = &c.entry("D8").unwrap().group;
    let (r, slice) =
        abelian_subgroup_extract(&Automorphism::identity(g), &ExtractOptions::default()).unwrap();
    assert_eq!(r.target_measure, Measure::new(3, 4));
    assert_eq!(r.result.order(), 4);
    // cyclic of order 4
    assert!(r.result.members().iter().any(|&x| g.element_order(x) == 4));
    assert_eq!(g.element_order(slice.t), 2);
    assert!(!r.result.contains(slice.t));
    assert_eq!(slice.slice.to_vec(), r.result.members().to_vec());
}

#[test]
fn heisenberg_engel_extraction() {
    let c = Catalog::bundled();
    let g = &c.entry("Heis27").unwrap().group;
    assert_eq!(torsion_set(g, 3).measure(), Measure::new(1, 1));
    for mode in [Mode::Proof, Mode::Direct, Mode::Both] {
        let r = engel_subgroup_extract(
            &Automorphism::identity(g),
            &ExtractOptions {
                mode,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(r.result.order(), 27, "{mode:?}");
    }
}

#[test]
fn large_group_runs_proof_following_only() {
    let c = Catalog::bundled();
    let g = &c.entry("Syl2S8").unwrap().group;
    let r = engel_subgroup_extract(&Automorphism::identity(g), &ExtractOptions::default()).unwrap();
    assert!(r.direct.is_none() || g.order() <= 200);
    assert!(r.verify());
}

#[test]
fn normal_cores_are_normal_and_idempotent() {
    let c = Catalog::bundled();
    for e in c.entries.iter().filter(|e| e.group.order() <= 27) {
        let g = &e.group;
        for x in g.elements() {
            let h = generate_subgroup(g, &[x]);
            let k = normal_core(&h);
            assert!(k.is_normal());
            assert!(k.is_subgroup_of(&h));
            assert_eq!(normal_core(&k), k);
            assert_eq!(k == h, h.is_normal());
        }
    }
}

#[test]
fn lemma_and_consequences_over_catalog() {
    let c = Catalog::bundled();
    for e in c.entries.iter().filter(|e| e.group.order() <= 27) {
        let r = engel::verify_lemma_2engel(&e.group, DEFAULT_TRIPLE_CAP).unwrap();
        assert!(r.holds(), "{}: {:?}", e.label(), r.counterexample);
        let whole = Subgroup::whole(&e.group);
        let cons = engel::verify_engel_consequences(&whole, DEFAULT_TRIPLE_CAP).unwrap();
        assert!(cons.holds(), "{}", e.label());
        let series = engel::nilpotency_class(&whole);
        for w in series.terms.windows(2) {
            assert!(w[1].is_subgroup_of(&w[0]));
            assert!(w[1].is_normal());
        }
    }
}

#[test]
fn semidirect_extensions_satisfy_lemma() {
    let c = Catalog::bundled();
    for label in ["Z7", "S3", "Z9"] {
        let e = c.entry(label).unwrap();
        for alpha in automorphisms(e).into_iter().filter(|a| 3 % a.order() == 0) {
            let ext = SemidirectExtension::new(&alpha).unwrap();
            let r = engel::verify_lemma_2engel(ext.group(), DEFAULT_TRIPLE_CAP).unwrap();
            assert!(r.holds());
        }
    }
}

#[test]
fn frobenius_extension_matches_bundled_f21() {
    let c = Catalog::bundled();
    let z7 = c.entry("Z7").unwrap();
    let ext = SemidirectExtension::new(&z7.automorphism("double").unwrap()).unwrap();
    let f21 = &c.entry("F21").unwrap().group;
    let profile = |g: &engelhaar::FiniteGroup| {
        let mut v: Vec<usize> = g.elements().map(|x| g.element_order(x)).collect();
        v.sort();
        v
    };
    assert_eq!(profile(ext.group()), profile(f21));
    assert_eq!(
        splitting_set(&z7.automorphism("double").unwrap())
            .unwrap()
            .measure(),
        Measure::new(1, 1)
    );
    assert_eq!(words::torsion_set(f21, 3).set.len(), 15);
}

/// Exhaustive k-large search against enumeration of every symmetric `U` containing the identity.
#[test]
fn exhaustive_klarge_is_maximum() {
    use engelhaar::haar::{klarge_certificate, Strategy};
    let c = Catalog::bundled();
    for e in c.entries.iter().filter(|e| e.group.order() <= 9) {
        let g = &e.group;
        let classes: Vec<Vec<usize>> = g
            .elements()
            .filter(|&x| x != g.identity() && x <= g.inv(x))
            .map(|x| {
                if g.inv(x) == x {
                    vec![x]
                } else {
                    vec![x, g.inv(x)]
                }
            })
            .collect();
        for n in 1..=3 {
            let a = torsion_set(g, n).set;
            for k in 1..=2 {
                let large = |u: &[usize]| {
                    u.iter().all(|&p| {
                        u.iter().all(|&q| {
                            let tuple = if k == 1 { vec![p] } else { vec![p, q] };
                            g.elements().any(|h| {
                                a.contains(h)
                                    && tuple.iter().all(|&t| a.contains(g.mul(g.inv(t), h)))
                            })
                        })
                    })
                };
                let best = (0u32..1 << classes.len())
                    .map(|mask| {
                        let mut u = vec![g.identity()];
                        for (i, cls) in classes.iter().enumerate() {
                            if mask >> i & 1 == 1 {
                                u.extend(cls);
                            }
                        }
                        u
                    })
                    .filter(|u| large(u))
                    .map(|u| u.len())
                    .max()
                    .unwrap();
                let cert = klarge_certificate(&a, k, Strategy::Exhaustive, 10_000_000).unwrap();
                assert_eq!(cert.witness_set.len(), best, "{} n={n} k={k}", e.label());
                assert!(cert.verify(10_000_000).unwrap());
            }
        }
    }
}
