//! Alpha-equivalence is an equivalence and a congruence, preserves free
//! atoms and unknowns, is equivariant, and agrees with the locally nameless
//! oracle. The permutation action respects composition.

use holc_core::atoms::AtomSet;
use holc_core::syntax::{alpha_eq, canonicalize, free_atoms, free_unknowns, perm_act, Term};
use holc_testkit::gen;
use holc_testkit::oracle;
use rand::Rng;

const MAX_INDEX: u64 = 5;

#[test]
fn alpha_eq_is_reflexive_symmetric_transitive_on_variants() {
    let mut rng = gen::rng(0x5EED_0001);
    for _ in 0..300 {
        let r = gen::random_term_untyped(&mut rng, 4, MAX_INDEX);
        let s = gen::alpha_variant(&mut rng, &r);
        let t = gen::alpha_variant(&mut rng, &s);
        assert!(alpha_eq(&r, &r));
        assert!(alpha_eq(&r, &s), "variant of {r:?} was {s:?}");
        assert!(alpha_eq(&s, &r));
        assert!(alpha_eq(&r, &t), "transitivity through {s:?}");
    }
}

#[test]
fn alpha_eq_is_a_congruence_including_cong_x() {
    let mut rng = gen::rng(0x5EED_0002);
    for _ in 0..200 {
        let s1 = gen::random_term_untyped(&mut rng, 3, MAX_INDEX);
        let s2 = gen::alpha_variant(&mut rng, &s1);
        let t = gen::random_term_untyped(&mut rng, 3, MAX_INDEX);
        let b = holc_core::Atom::down(0);
        assert!(alpha_eq(
            &Term::app(s1.clone(), t.clone()),
            &Term::app(s2.clone(), t.clone())
        ));
        assert!(alpha_eq(
            &Term::lam(holc_core::Atom::up(0), holc_core::SimpleType::base("t"), s1.clone()),
            &Term::lam(holc_core::Atom::up(0), holc_core::SimpleType::base("t"), s2.clone()),
        ));
        assert!(alpha_eq(
            &Term::moderated("X", vec![(b, s1.clone())]),
            &Term::moderated("X", vec![(b, s2.clone())]),
        ));
    }
}

#[test]
fn alpha_equal_terms_have_equal_free_atoms_and_unknowns() {
    let mut rng = gen::rng(0x5EED_0003);
    for _ in 0..300 {
        let r = gen::random_term_untyped(&mut rng, 4, MAX_INDEX);
        let s = gen::alpha_variant(&mut rng, &r);
        assert_eq!(free_atoms(&r), free_atoms(&s));
        assert_eq!(free_unknowns(&r), free_unknowns(&s));
    }
}

#[test]
fn alpha_eq_and_free_atoms_are_equivariant() {
    let mut rng = gen::rng(0x5EED_0004);
    for _ in 0..300 {
        let r = gen::random_term_untyped(&mut rng, 4, MAX_INDEX);
        let s = if rng.random_bool(0.5) {
            gen::alpha_variant(&mut rng, &r)
        } else {
            gen::random_term_untyped(&mut rng, 4, MAX_INDEX)
        };
        let pi = gen::random_up_permutation(&mut rng, MAX_INDEX + 3, 3);
        let pr = perm_act(&pi, &r).unwrap();
        let ps = perm_act(&pi, &s).unwrap();
        assert_eq!(alpha_eq(&r, &s), alpha_eq(&pr, &ps));
        assert_eq!(free_atoms(&pr), free_atoms(&r).permute(&pi));
    }
}

#[test]
fn perm_action_respects_composition() {
    let mut rng = gen::rng(0x5EED_0005);
    for _ in 0..300 {
        let r = gen::random_term_untyped(&mut rng, 4, MAX_INDEX);
        let p = gen::random_up_permutation(&mut rng, MAX_INDEX + 3, 3);
        let q = gen::random_up_permutation(&mut rng, MAX_INDEX + 3, 3);
        let both = perm_act(&p.compose(&q), &r).unwrap();
        let stepwise = perm_act(&p, &perm_act(&q, &r).unwrap()).unwrap();
        assert_eq!(both, stepwise);
    }
}

#[test]
fn alpha_eq_agrees_with_the_locally_nameless_oracle() {
    let mut rng = gen::rng(0x5EED_0006);
    for i in 0..400 {
        let r = gen::random_term_untyped(&mut rng, 4, MAX_INDEX);
        let s = if i % 2 == 0 {
            gen::alpha_variant(&mut rng, &r)
        } else {
            gen::random_term_untyped(&mut rng, 4, MAX_INDEX)
        };
        assert_eq!(
            alpha_eq(&r, &s),
            oracle::alpha_eq_oracle(&r, &s),
            "disagreement on {r:?} vs {s:?}"
        );
    }
}

#[test]
fn canonicalize_picks_one_representative_per_class() {
    let mut rng = gen::rng(0x5EED_0007);
    for _ in 0..300 {
        let r = gen::random_term_untyped(&mut rng, 4, MAX_INDEX);
        let s = gen::alpha_variant(&mut rng, &r);
        assert!(alpha_eq(&canonicalize(&r), &r));
        assert_eq!(canonicalize(&r), canonicalize(&s));
    }
}

#[test]
fn free_atoms_of_hole_terms_are_cofinite() {
    let mut rng = gen::rng(0x5EED_0008);
    for _ in 0..200 {
        let r = gen::random_term_untyped(&mut rng, 4, MAX_INDEX);
        let fa = free_atoms(&r);
        if free_unknowns(&r).is_empty() {
            assert!(fa.is_finite(), "hole-free term with cofinite atoms: {r:?}");
        } else {
            assert!(!fa.is_finite(), "hole term with finite atoms: {r:?}");
            assert!(matches!(fa, AtomSet::CofiniteDown { .. }));
        }
    }
}
