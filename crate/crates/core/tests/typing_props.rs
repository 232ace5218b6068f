//! Weakening, strengthening, the typed substitution lemmas for both levels,
//! and equivariance of the typing relation, on random typed terms.

use holc_core::atoms::{fresh_up, Atom};
use holc_core::subst::{subst_l1, subst_l2, SubstL2};
use holc_core::syntax::{free_atoms, perm_act, SimpleType, Signature, Term};
use holc_core::typing::{infer, Context, TypeErrorKind};
use holc_testkit::gen::{self, GenCfg};
use rand::Rng;

fn sig() -> Signature {
    Signature::new(["t".to_string(), "u".to_string()])
        .unwrap()
        .with_constant("C", SimpleType::base("t"))
        .with_constant(
            "F",
            SimpleType::arrow(SimpleType::base("t"), SimpleType::base("u")),
        )
}

fn cfg() -> GenCfg {
    GenCfg {
        max_size: 20,
        max_atom_index: 8,
        allow_unknowns: true,
        down_free_atoms_only: false,
    }
}

#[test]
fn weakening_preserves_types_for_fresh_atoms_of_either_sort() {
    let sig = sig();
    let mut rng = gen::rng(0x7E57_0001);
    for _ in 0..300 {
        let ctx = gen::random_context(&mut rng, &sig, &cfg());
        let ty = gen::random_type(&mut rng, &sig, 2);
        let r = gen::random_term_of_type(&mut rng, &sig, &ctx, &ty, 15, &cfg());
        assert_eq!(infer(&sig, &ctx, &r), Ok(ty.clone()));

        let fresh_index = 50 + rng.random_range(0..10u64);
        let fresh = if rng.random_bool(0.5) {
            Atom::up(fresh_index)
        } else {
            Atom::down(fresh_index)
        };
        let widened = ctx
            .clone()
            .with_atom(fresh, gen::random_type(&mut rng, &sig, 1));
        assert_eq!(infer(&sig, &widened, &r), Ok(ty));
    }
}

#[test]
fn strengthening_removes_unused_up_atoms_only() {
    let sig = sig();
    let mut rng = gen::rng(0x7E57_0002);
    let mut positive = 0;
    while positive < 300 {
        let ctx = gen::random_context(&mut rng, &sig, &cfg());
        let ty = gen::random_type(&mut rng, &sig, 2);
        let r = gen::random_term_of_type(&mut rng, &sig, &ctx, &ty, 12, &cfg());
        let fa = free_atoms(&r);
        let Some((unused, _)) = ctx.atoms().find(|(a, _)| a.is_up() && !fa.contains(*a)) else {
            continue;
        };
        let mut narrowed = ctx.clone();
        narrowed.remove_atom(unused);
        assert_eq!(infer(&sig, &narrowed, &r), Ok(ty));
        positive += 1;
    }
}

#[test]
fn removing_a_moderation_domain_typing_breaks_the_derivation() {
    // down atoms in a moderation domain must stay typed even though they are
    // not free in the term
    let sig = sig();
    let b = Atom::down(0);
    let ctx = Context::new()
        .with_atom(b, SimpleType::base("t"))
        .with_unknown("X", SimpleType::base("u"));
    let r = Term::moderated("X", vec![(b, Term::constant("C"))]);
    assert_eq!(infer(&sig, &ctx, &r), Ok(SimpleType::base("u")));
    assert!(!free_atoms(&r).contains(b));

    let mut narrowed = ctx.clone();
    narrowed.remove_atom(b);
    assert_eq!(
        infer(&sig, &narrowed, &r).map_err(|e| e.kind),
        Err(TypeErrorKind::UntypedModerationDomain(b))
    );
}

#[test]
fn typed_simultaneous_substitution_preserves_the_type() {
    let sig = sig();
    let mut rng = gen::rng(0x7E57_0003);
    for _ in 0..300 {
        let ctx = gen::random_context(&mut rng, &sig, &cfg());
        let ty = gen::random_type(&mut rng, &sig, 2);
        let r = gen::random_term_of_type(&mut rng, &sig, &ctx, &ty, 12, &cfg());
        let sigma = gen::random_typed_subst(&mut rng, &sig, &ctx, &cfg(), 3);
        let out = subst_l1(&r, &sigma);
        assert_eq!(
            infer(&sig, &ctx, &out),
            Ok(ty),
            "type not preserved: {r:?} under {sigma:?}"
        );
    }
}

#[test]
fn instantiating_a_typed_unknown_preserves_the_type() {
    let sig = sig();
    let mut rng = gen::rng(0x7E57_0004);
    let mut tested = 0;
    while tested < 300 {
        let ctx = gen::random_context(&mut rng, &sig, &cfg());
        let Some((x, xty)) = ctx.unknowns().next().map(|(x, t)| (x.clone(), t.clone())) else {
            continue;
        };
        let ty = gen::random_type(&mut rng, &sig, 2);
        let r = gen::random_term_of_type(&mut rng, &sig, &ctx, &ty, 12, &cfg());
        let mut outer = ctx.clone();
        outer.remove_unknown(&x);
        let t = gen::random_term_of_type(&mut rng, &sig, &outer, &xty, 8, &cfg());
        let out = subst_l2(&r, &SubstL2::single(x.clone(), t));
        assert_eq!(
            infer(&sig, &outer, &out),
            Ok(ty),
            "instantiation broke typing for {r:?}"
        );
        tested += 1;
    }
}

#[test]
fn typing_is_equivariant() {
    let sig = sig();
    let mut rng = gen::rng(0x7E57_0005);
    for _ in 0..300 {
        let ctx = gen::random_context(&mut rng, &sig, &cfg());
        let ty = gen::random_type(&mut rng, &sig, 2);
        let r = gen::random_term_of_type(&mut rng, &sig, &ctx, &ty, 12, &cfg());
        let pi = gen::random_up_permutation(&mut rng, 12, 3);
        assert_eq!(
            infer(&sig, &ctx.permute(&pi), &perm_act(&pi, &r).unwrap()),
            Ok(ty)
        );
    }
}

#[test]
fn lambda_binders_never_shadow_after_inference() {
    // the L rule renames a binder that is already in the context; the
    // synthesized type must match the unshadowed reading
    let sig = sig();
    let a = Atom::up(0);
    let ctx = Context::new().with_atom(a, SimpleType::base("u"));
    let r = Term::lam(a, SimpleType::base("t"), Term::atom(a));
    assert_eq!(
        infer(&sig, &ctx, &r),
        Ok(SimpleType::arrow(SimpleType::base("t"), SimpleType::base("t")))
    );
    // the fresh binder avoids both the context and the body's free atoms
    let avoid = ctx.atom_domain().union(&free_atoms(&r));
    assert!(!avoid.contains(fresh_up(&avoid)));
}
