//! A brute-force mirror of `AtomSet` over a finite universe: explicit
//! members inside the universe plus a tail bit saying whether every down
//! atom outside the universe belongs to the set. Exact as long as the
//! universe contains every atom any operand mentions.

use std::collections::BTreeSet;

use holc_core::atoms::{Atom, AtomSet};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MirrorSet {
    pub members: BTreeSet<Atom>,
    pub all_other_down: bool,
}

/// The universe of both sorts up to `max_index`, which should cover every
/// index mentioned by the sets under test plus a margin.
pub fn universe(max_index: u64) -> Vec<Atom> {
    (0..=max_index)
        .flat_map(|i| [Atom::up(i), Atom::down(i)])
        .collect()
}

impl MirrorSet {
    pub fn of(s: &AtomSet, universe: &[Atom]) -> MirrorSet {
        MirrorSet {
            members: universe.iter().copied().filter(|&a| s.contains(a)).collect(),
            all_other_down: !matches!(s, AtomSet::Finite(_)),
        }
    }

    pub fn contains(&self, a: Atom) -> bool {
        self.members.contains(&a)
    }

    pub fn union(&self, other: &MirrorSet) -> MirrorSet {
        MirrorSet {
            members: self.members.union(&other.members).copied().collect(),
            all_other_down: self.all_other_down || other.all_other_down,
        }
    }

    pub fn remove(&self, a: Atom) -> MirrorSet {
        let mut members = self.members.clone();
        members.remove(&a);
        MirrorSet {
            members,
            all_other_down: self.all_other_down,
        }
    }

    pub fn insert(&self, a: Atom) -> MirrorSet {
        let mut members = self.members.clone();
        members.insert(a);
        MirrorSet {
            members,
            all_other_down: self.all_other_down,
        }
    }

    pub fn is_subset(&self, other: &MirrorSet) -> bool {
        self.members.is_subset(&other.members) && (!self.all_other_down || other.all_other_down)
    }
}
