//! Capture-avoiding level-1 (atom) substitution, including composition onto
//! moderated unknowns, and level-2 (unknown) substitution.
//!
//! Level-1 substitution is simultaneous from the start; the single case
//! `r[a:=t]` is the one-entry map. When a substitution reaches a moderated
//! unknown it composes: entries whose domain atom is already moderated apply
//! to the stored ranges, new down-sorted entries join the moderation, and
//! new up-sorted entries are dropped (an up atom cannot appear free in
//! whatever the unknown later becomes under its moderation).

use std::collections::BTreeMap;

use crate::atoms::{fresh_up, Atom, AtomSet};
use crate::syntax::{free_atoms, free_unknowns, swap_up, Term, UnknownName};

/// A finite simultaneous atom-to-term map. Domain atoms may be of either
/// sort; only down-sorted entries survive onto a moderation.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SubstL1 {
    entries: BTreeMap<Atom, Term>,
}

impl SubstL1 {
    pub fn new() -> Self {
        SubstL1::default()
    }

    pub fn single(a: Atom, t: Term) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(a, t);
        SubstL1 { entries }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Atom, Term)>) -> Self {
        let mut entries = BTreeMap::new();
        for (a, t) in pairs {
            let clash = entries.insert(a, t);
            assert!(clash.is_none(), "substitution domain atoms must be distinct");
        }
        SubstL1 { entries }
    }

    pub fn insert(&mut self, a: Atom, t: Term) {
        self.entries.insert(a, t);
    }

    pub fn get(&self, a: Atom) -> Option<&Term> {
        self.entries.get(&a)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Atom, &Term)> {
        self.entries.iter().map(|(&a, t)| (a, t))
    }

    pub fn domain(&self) -> impl Iterator<Item = Atom> + '_ {
        self.entries.keys().copied()
    }

    /// Rename the up-sorted part of the domain and act on all ranges; down
    /// domain atoms are fixed. Used by the equivariance properties.
    pub fn permute(&self, pi: &crate::atoms::Permutation) -> SubstL1 {
        assert!(pi.moves_only_up());
        SubstL1 {
            entries: self
                .entries
                .iter()
                .map(|(&a, t)| (pi.apply(a), crate::syntax::perm_act(pi, t).expect("up-only")))
                .collect(),
        }
    }
}

/// A map from unknowns to terms, the identity outside its finite support.
/// No constraint is put on the free atoms of the ranges.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SubstL2 {
    entries: BTreeMap<UnknownName, Term>,
}

impl SubstL2 {
    pub fn new() -> Self {
        SubstL2::default()
    }

    pub fn single(x: impl Into<UnknownName>, t: Term) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(x.into(), t);
        SubstL2 { entries }
    }

    pub fn insert(&mut self, x: impl Into<UnknownName>, t: Term) {
        self.entries.insert(x.into(), t);
    }

    /// Total lookup: unknowns outside the map go to themselves.
    pub fn apply_to(&self, x: &UnknownName) -> Term {
        self.entries
            .get(x)
            .cloned()
            .unwrap_or_else(|| Term::Unk {
                name: x.clone(),
                mods: Vec::new(),
            })
    }

    pub fn iter(&self) -> impl Iterator<Item = (&UnknownName, &Term)> {
        self.entries.iter()
    }
}

/// Capture-avoiding simultaneous substitution of terms for atoms.
pub fn subst_l1(r: &Term, sigma: &SubstL1) -> Term {
    if sigma.is_empty() {
        return r.clone();
    }
    match r {
        Term::Atom(a) => sigma.get(*a).cloned().unwrap_or_else(|| r.clone()),
        Term::Const(_) => r.clone(),
        Term::App(f, x) => Term::app(subst_l1(f, sigma), subst_l1(x, sigma)),
        Term::Lam { binder, ty, body } => {
            // side condition: binder outside the domain and all range atoms
            let clashes = sigma
                .iter()
                .any(|(a, s)| a == *binder || free_atoms(s).contains(*binder));
            if clashes {
                let mut avoid = free_atoms(body);
                for (a, s) in sigma.iter() {
                    avoid = avoid.insert(a).union(&free_atoms(s));
                }
                let fresh = fresh_up(&avoid);
                let body = swap_up(fresh, *binder, body);
                Term::lam(fresh, ty.clone(), subst_l1(&body, sigma))
            } else {
                Term::lam(*binder, ty.clone(), subst_l1(body, sigma))
            }
        }
        Term::Unk { name, mods } => {
            let mut out: Vec<(Atom, Term)> = mods
                .iter()
                .map(|(b, s)| (*b, subst_l1(s, sigma)))
                .collect();
            // new entries: down-sorted, not already moderated, in index order
            for (a, s) in sigma.iter() {
                if a.is_down() && !mods.iter().any(|(b, _)| *b == a) {
                    out.push((a, s.clone()));
                }
            }
            Term::Unk {
                name: name.clone(),
                mods: out,
            }
        }
    }
}

/// Instantiate unknowns. Moderations are pushed onto the replacement via
/// level-1 substitution; lambda binders are renamed away from the up-sorted
/// free atoms of every replacement for an unknown free in the body.
pub fn subst_l2(r: &Term, theta: &SubstL2) -> Term {
    match r {
        Term::Atom(_) | Term::Const(_) => r.clone(),
        Term::App(f, x) => Term::app(subst_l2(f, theta), subst_l2(x, theta)),
        Term::Lam { binder, ty, body } => {
            let mut replaced = AtomSet::empty();
            for x in free_unknowns(body) {
                replaced = replaced.union(&free_atoms(&theta.apply_to(&x)));
            }
            if replaced.contains(*binder) {
                let avoid = replaced.union(&free_atoms(body)).insert(*binder);
                let fresh = fresh_up(&avoid);
                let body = swap_up(fresh, *binder, body);
                Term::lam(fresh, ty.clone(), subst_l2(&body, theta))
            } else {
                Term::lam(*binder, ty.clone(), subst_l2(body, theta))
            }
        }
        Term::Unk { name, mods } => {
            let replacement = theta.apply_to(name);
            let sigma = SubstL1::from_pairs(
                mods.iter().map(|(b, s)| (*b, subst_l2(s, theta))),
            );
            subst_l1(&replacement, &sigma)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{alpha_eq, down_atom, up_atom, SimpleType};

    fn t() -> SimpleType {
        SimpleType::base("t")
    }

    #[test]
    fn composition_keeps_existing_entries_first() {
        // X['b:='b']['b':='b''] = X['b:='b'', 'b':='b'']
        let b0 = down_atom(1); // 'b
        let b1 = crate::atoms::Atom::parse_name("'b'").unwrap();
        let b2 = crate::atoms::Atom::parse_name("'b''").unwrap();
        let step1 = subst_l1(&Term::unknown("X"), &SubstL1::single(b0, Term::atom(b1)));
        assert_eq!(step1, Term::moderated("X", vec![(b0, Term::atom(b1))]));
        let step2 = subst_l1(&step1, &SubstL1::single(b1, Term::atom(b2)));
        assert_eq!(
            step2,
            Term::moderated("X", vec![(b0, Term::atom(b2)), (b1, Term::atom(b2))])
        );
    }

    #[test]
    fn up_sorted_entries_are_dropped_on_unknowns() {
        // X['b:=a][a:='b''] = X['b:='b'']
        let b0 = down_atom(1);
        let b2 = crate::atoms::Atom::parse_name("'b''").unwrap();
        let a = up_atom(0);
        let step1 = subst_l1(&Term::unknown("X"), &SubstL1::single(b0, Term::atom(a)));
        let step2 = subst_l1(&step1, &SubstL1::single(a, Term::atom(b2)));
        assert_eq!(step2, Term::moderated("X", vec![(b0, Term::atom(b2))]));
    }

    #[test]
    fn binder_freshened_to_least_fresh_up_atom() {
        // (\c:t. 'b)['b := c] renames the binder before substituting
        let c = up_atom(2);
        let b = down_atom(1);
        let r = Term::lam(c, t(), Term::atom(b));
        let out = subst_l1(&r, &SubstL1::single(b, Term::atom(c)));
        assert_eq!(out, Term::lam(up_atom(0), t(), Term::atom(c)));
        assert!(alpha_eq(&out, &Term::lam(up_atom(5), t(), Term::atom(c))));
    }

    #[test]
    fn empty_substitution_is_identity() {
        let r = Term::lam(up_atom(0), t(), Term::unknown("X"));
        assert_eq!(subst_l1(&r, &SubstL1::new()), r);
    }

    #[test]
    fn level2_completes_the_incomplete_identity() {
        // (\a:t. X['b:=a])[X:='b] = \a:t. a
        let a = up_atom(0);
        let b = down_atom(1);
        let r = Term::lam(a, t(), Term::moderated("X", vec![(b, Term::atom(a))]));
        let out = subst_l2(&r, &SubstL2::single("X", Term::atom(b)));
        assert_eq!(out, Term::lam(a, t(), Term::atom(a)));
    }

    #[test]
    fn level2_fixes_atoms() {
        let theta = SubstL2::single("X", Term::constant("C"));
        assert_eq!(subst_l2(&Term::atom(up_atom(0)), &theta), Term::atom(up_atom(0)));
    }

    #[test]
    fn level2_on_bare_unknown_is_the_replacement() {
        let replacement = Term::app(Term::constant("C"), Term::atom(down_atom(0)));
        let theta = SubstL2::single("X", replacement.clone());
        assert_eq!(subst_l2(&Term::unknown("X"), &theta), replacement);
    }

    #[test]
    fn level2_renames_binder_away_from_replacement_atoms() {
        // (\a:t. X)[X := a] must not capture the free a of the replacement
        let a = up_atom(0);
        let r = Term::lam(a, t(), Term::unknown("X"));
        let out = subst_l2(&r, &SubstL2::single("X", Term::atom(a)));
        match &out {
            Term::Lam { binder, body, .. } => {
                assert_ne!(*binder, a);
                assert_eq!(**body, Term::atom(a));
            }
            other => panic!("expected a lambda, got {other:?}"),
        }
    }

    #[test]
    fn level2_untouched_unknowns_keep_their_moderation() {
        let b = down_atom(1);
        let r = Term::moderated("Y", vec![(b, Term::unknown("X"))]);
        let theta = SubstL2::single("X", Term::atom(b));
        assert_eq!(
            subst_l2(&r, &theta),
            Term::moderated("Y", vec![(b, Term::atom(b))])
        );
    }
}
