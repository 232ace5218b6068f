//! Group laws for permutations and set laws for `AtomSet`, the latter
//! cross-checked against a brute-force oracle over a finite atom universe.

use std::collections::BTreeSet;

use proptest::prelude::*;

use holc_core::atoms::{Atom, AtomSet, Permutation, Sort};
use holc_testkit::setoracle::{universe, MirrorSet};

fn atom() -> impl Strategy<Value = Atom> {
    (any::<bool>(), 0u64..10).prop_map(|(up, i)| {
        Atom::new(if up { Sort::Up } else { Sort::Down }, i)
    })
}

fn permutation() -> impl Strategy<Value = Permutation> {
    proptest::collection::vec((atom(), atom()), 0..6).prop_map(|pairs| {
        pairs
            .into_iter()
            .fold(Permutation::identity(), |acc, (a, b)| {
                if a == b {
                    acc
                } else {
                    acc.compose(&Permutation::swap(a, b).unwrap())
                }
            })
    })
}

fn atomset() -> impl Strategy<Value = AtomSet> {
    let up_atoms = proptest::collection::btree_set((0u64..10).prop_map(Atom::up), 0..4);
    let down_atoms = proptest::collection::btree_set((0u64..10).prop_map(Atom::down), 0..4);
    let finite = proptest::collection::btree_set(atom(), 0..6).prop_map(AtomSet::Finite);
    let cofinite =
        (down_atoms, up_atoms).prop_map(|(e, u)| AtomSet::cofinite_down(e, u));
    prop_oneof![finite, cofinite]
}

proptest! {
    #[test]
    fn composition_is_associative(p in permutation(), q in permutation(), r in permutation()) {
        prop_assert_eq!(p.compose(&q).compose(&r), p.compose(&q.compose(&r)));
    }

    #[test]
    fn identity_and_inverse_laws(p in permutation()) {
        prop_assert_eq!(p.compose(&Permutation::identity()), p.clone());
        prop_assert_eq!(Permutation::identity().compose(&p), p.clone());
        prop_assert_eq!(p.compose(&p.inverse()), Permutation::identity());
        prop_assert_eq!(p.inverse().compose(&p), Permutation::identity());
    }

    #[test]
    fn nontriv_is_a_finite_bijection_without_fixpoints(p in permutation()) {
        let dom = p.nontriv();
        let range: BTreeSet<Atom> = dom.iter().map(|&a| p.apply(a)).collect();
        prop_assert_eq!(&dom, &range);
        for &a in &dom {
            prop_assert_ne!(p.apply(a), a);
        }
    }

    #[test]
    fn swap_factorization_recomposes(p in permutation()) {
        let rebuilt = p
            .as_swaps()
            .into_iter()
            .fold(Permutation::identity(), |acc, (a, b)| {
                acc.compose(&Permutation::swap(a, b).unwrap())
            });
        prop_assert_eq!(rebuilt, p);
    }

    #[test]
    fn set_ops_agree_with_the_finite_universe_oracle(
        s in atomset(),
        t in atomset(),
        a in atom(),
    ) {
        let u = universe(12);
        let ms = MirrorSet::of(&s, &u);
        let mt = MirrorSet::of(&t, &u);
        prop_assert_eq!(MirrorSet::of(&s.union(&t), &u), ms.union(&mt));
        prop_assert_eq!(MirrorSet::of(&s.remove(a), &u), ms.remove(a));
        prop_assert_eq!(MirrorSet::of(&s.insert(a), &u), ms.insert(a));
        prop_assert_eq!(s.contains(a), ms.contains(a));
        prop_assert_eq!(s.is_subset(&t), ms.is_subset(&mt));
    }

    #[test]
    fn union_laws_hold_structurally(s in atomset(), t in atomset(), r in atomset()) {
        prop_assert_eq!(s.union(&t), t.union(&s));
        prop_assert_eq!(s.union(&t).union(&r), s.union(&t.union(&r)));
        prop_assert_eq!(s.union(&s), s.clone());
        prop_assert!(s.is_subset(&s.union(&t)));
        prop_assert!(s.union(&t).is_subset(&s.union(&t.union(&r))));
    }

    #[test]
    fn fresh_up_is_fresh(s in atomset()) {
        let a = holc_core::fresh_up(&s);
        prop_assert!(a.is_up());
        prop_assert!(!s.contains(a));
    }
}
