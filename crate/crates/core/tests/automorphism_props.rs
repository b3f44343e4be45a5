mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rbcm::automorphism::{
    apply, compose, conjugate_normal_form, enumerate_params, inverse, is_valid, lift, lifts_to_whole, normal_form,
    plus_group, restrict_to_plus, simplified_compose_c_ge_b, AutParams, Conjugation,
};
use rbcm::metacyclic::{Delta, Element, Group};

/// Generator-image pairs that respect the relations and generate, found by
/// scanning all pairs and closing under multiplication.
fn brute_force_automorphisms(g: &Group) -> Vec<AutParams> {
    let elems: Vec<Element> = g.elements().collect();
    let mut out = Vec::new();
    for &a in &elems {
        for &b in &elems {
            if g.relations_hold(g, a, b) && g.closure(&[a, b]).iter().all(|&x| x) {
                out.push(AutParams::from_images(a, b));
            }
        }
    }
    out
}

#[test]
fn parameter_count_matches_brute_force() {
    for (n, m, r) in [(16, 4, 5), (64, 8, 17), (32, 8, 5)] {
        let g = Group::new(n, m, r).unwrap();
        let mut params = enumerate_params(&g).unwrap();
        let mut brute = brute_force_automorphisms(&g);
        params.sort();
        brute.sort();
        assert_eq!(params.len(), brute.len(), "{g}");
        assert_eq!(params, brute, "{g}");
    }
}

#[test]
fn validated_params_preserve_relations() {
    let g = Group::new(32, 8, 5).unwrap();
    for p in enumerate_params(&g).unwrap() {
        assert!(g.relations_hold(&g, p.alpha_image(), p.beta_image()), "{p}");
    }
}

#[test]
fn apply_is_homomorphic_extension() {
    let g = Group::new(16, 4, 5).unwrap();
    for p in enumerate_params(&g).unwrap() {
        for e in g.elements() {
            assert_eq!(apply(&g, &p, e), g.hom_apply(p.alpha_image(), p.beta_image(), e));
        }
    }
}

fn random_aut(g: &Group, pool: &[AutParams], rng: &mut ChaCha8Rng) -> AutParams {
    let _ = g;
    pool[rng.gen_range(0..pool.len())]
}

#[test]
fn compose_matches_sequential_application() {
    let mut rng = ChaCha8Rng::seed_from_u64(common::seed() ^ 7);
    for (n, m, r) in [(16, 4, 5), (32, 8, 5), (128, 8, 17)] {
        let g = Group::new(n, m, r).unwrap();
        let pool = enumerate_params(&g).unwrap();
        for _ in 0..10_000 / 3 {
            let s = random_aut(&g, &pool, &mut rng);
            let t = random_aut(&g, &pool, &mut rng);
            let st = compose(&g, &s, &t);
            let e = g.element_at(rng.gen_range(0..g.order() as usize));
            assert_eq!(apply(&g, &st, e), apply(&g, &s, apply(&g, &t, e)));
        }
    }
}

#[test]
fn compose_is_associative_on_small_group() {
    let g = Group::new(16, 4, 5).unwrap();
    let pool = enumerate_params(&g).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(common::seed() ^ 11);
    for _ in 0..2000 {
        let [a, b, c] = [0; 3].map(|_| pool[rng.gen_range(0..pool.len())]);
        assert_eq!(compose(&g, &compose(&g, &a, &b), &c), compose(&g, &a, &compose(&g, &b, &c)));
    }
}

#[test]
fn simplified_composition_agrees_with_general() {
    let mut rng = ChaCha8Rng::seed_from_u64(common::seed() ^ 2024);
    for (n, m, r) in [(64, 8, 17), (128, 8, 17), (256, 8, 33), (512, 16, 33)] {
        let g = Group::new(n, m, r).unwrap();
        let pool = enumerate_params(&g).unwrap();
        for _ in 0..10_000 {
            let s = pool[rng.gen_range(0..pool.len())];
            let t = pool[rng.gen_range(0..pool.len())];
            assert_eq!(simplified_compose_c_ge_b(&g, &s, &t).unwrap(), compose(&g, &s, &t), "{g}: {s} ∘ {t}");
        }
    }
}

#[test]
fn inverse_is_two_sided() {
    let g = Group::new(32, 8, 5).unwrap();
    for p in enumerate_params(&g).unwrap() {
        let q = inverse(&g, &p);
        assert!(compose(&g, &p, &q).is_identity(&g));
        assert!(compose(&g, &q, &p).is_identity(&g));
    }
}

#[test]
fn restriction_agrees_with_coordinate_maps() {
    let d = Delta::new(7, 3, 4).unwrap();
    let g = d.group();
    let plus = g.plus_presentation(rbcm::metacyclic::Index2Kind::AlphaSqBeta).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(common::seed() ^ 3);
    let pool = enumerate_params(&g).unwrap();
    for _ in 0..500 {
        let tau = pool[rng.gen_range(0..pool.len())];
        match restrict_to_plus(&d, &tau) {
            Ok(r) => {
                assert_eq!(tau.x2 % 2, 0);
                for _ in 0..20 {
                    let h = plus.sub.element_at(rng.gen_range(0..plus.sub.order() as usize));
                    let direct = apply(&g, &tau, plus.include(h));
                    assert_eq!(direct, plus.include(apply(&plus.sub, &r.params, h)));
                }
            }
            Err(_) => assert_eq!(tau.x2 % 2, 1),
        }
    }
}

#[test]
fn lifting_criterion_matches_search() {
    for (a, b, c) in [(7, 3, 4), (8, 3, 5), (7, 4, 3)] {
        let d = Delta::new(a, b, c).unwrap();
        let gp = plus_group(&d);
        for p in enumerate_params(&gp).unwrap() {
            let found = lift(&d, &p);
            assert_eq!(lifts_to_whole(&d, &p), found.is_some(), "{d} {p}");
            if let Some(tau) = found {
                assert!(is_valid(&d.group(), &tau));
                assert_eq!(restrict_to_plus(&d, &tau).unwrap().params, p);
            }
        }
    }
}

#[test]
fn conjugation_calculus_matches_composition() {
    let d = Delta::new(7, 3, 4).unwrap();
    let gp = plus_group(&d);
    let w = (8 + 1 - 4) % 8;
    for z1 in 0..4u64 {
        let z = (64 - 1 + 4 + 8 * z1) % 64;
        let sigma = normal_form(z, w);
        for tau in enumerate_params(&gp).unwrap().into_iter().filter(|t| lifts_to_whole(&d, t)) {
            let conj = compose(&gp, &compose(&gp, &tau, &sigma), &inverse(&gp, &tau));
            match conjugate_normal_form(&d, &tau, z, w).unwrap() {
                Conjugation::NormalForm { z: z2, w: w2 } => {
                    assert_eq!(conj, normal_form(z2, w2), "{tau}");
                    assert!(tau.x2 % 32 == 0);
                    assert_eq!(z2, (z + tau.x2) % 64);
                    assert_eq!(w2, w);
                }
                Conjugation::Incompatible(checks) => {
                    assert!(!checks.all());
                    assert!(conj.y1 != 1 || conj.x2 != 0, "{tau} gave normal form {conj}");
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(common::config(256))]
    #[test]
    fn automorphisms_fix_identity(idx in 0usize..1 << 20) {
        let g = Group::new(64, 8, 17).unwrap();
        let pool = enumerate_params(&g).unwrap();
        let p = pool[idx % pool.len()];
        prop_assert!(is_valid(&g, &p));
        prop_assert_eq!(apply(&g, &p, g.identity()), g.identity());
        prop_assert!(g.relations_hold(&g, p.alpha_image(), p.beta_image()));
    }
}
