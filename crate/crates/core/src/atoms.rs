//! Two-sorted atoms, finite permutations, and finite/cofinite atom sets.
//!
//! Atoms come in two disjoint countably infinite sorts: `Down` atoms can be
//! captured when an unknown is instantiated, `Up` atoms are the ones a lambda
//! may bind. Permutations are finite products of swappings and act on
//! everything else in the kernel. `AtomSet` is the value space of free-atom
//! computations; it has a cofinite variant because the free atoms of a
//! moderated unknown are all of the down sort minus finitely many.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Sort of an atom.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Sort {
    /// Capturable by instantiation of an unknown; written with a leading `'`.
    Down,
    /// Bindable by lambda.
    Up,
}

/// An atom is a (sort, index) pair. Both sorts are unbounded.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Atom {
    sort: Sort,
    index: u64,
}

impl Atom {
    pub const fn new(sort: Sort, index: u64) -> Self {
        Atom { sort, index }
    }

    pub const fn up(index: u64) -> Self {
        Atom::new(Sort::Up, index)
    }

    pub const fn down(index: u64) -> Self {
        Atom::new(Sort::Down, index)
    }

    pub const fn sort(self) -> Sort {
        self.sort
    }

    pub const fn index(self) -> u64 {
        self.index
    }

    pub const fn is_up(self) -> bool {
        matches!(self.sort, Sort::Up)
    }

    pub const fn is_down(self) -> bool {
        matches!(self.sort, Sort::Down)
    }

    /// Canonical printed name. Indices biject with names of the shape
    /// `letter digits* primes*`, so 0..=25 print `a`..`z`, 26 prints `a1`,
    /// 52 prints `a'`, and so on. Down atoms carry a leading apostrophe.
    pub fn name(self) -> String {
        let letter = (self.index % 26) as u8;
        let (number, primes) = unpair(self.index / 26);
        let mut out = String::new();
        if self.is_down() {
            out.push('\'');
        }
        out.push((b'a' + letter) as char);
        if number > 0 {
            out.push_str(&number.to_string());
        }
        for _ in 0..primes {
            out.push('\'');
        }
        out
    }

    /// Inverse of [`Atom::name`]. Accepts `'?[a-z][0-9]*'*`; digits and
    /// primes may be combined, e.g. `b1'`.
    pub fn parse_name(s: &str) -> Option<Atom> {
        let (sort, rest) = match s.strip_prefix('\'') {
            Some(rest) => (Sort::Down, rest),
            None => (Sort::Up, s),
        };
        let mut chars = rest.chars();
        let letter = chars.next()?;
        if !letter.is_ascii_lowercase() {
            return None;
        }
        let mut number: u64 = 0;
        let mut primes: u64 = 0;
        let mut seen_prime = false;
        for c in chars {
            if c.is_ascii_digit() && !seen_prime {
                number = number.checked_mul(10)?.checked_add(c as u64 - '0' as u64)?;
            } else if c == '\'' {
                seen_prime = true;
                primes = primes.checked_add(1)?;
            } else {
                return None;
            }
        }
        let index = (letter as u64 - 'a' as u64).checked_add(26u64.checked_mul(pair(number, primes)?)?)?;
        Some(Atom::new(sort, index))
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("`{0}` is not a valid atom name")]
pub struct AtomNameError(pub String);

impl FromStr for Atom {
    type Err = AtomNameError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Atom::parse_name(s).ok_or_else(|| AtomNameError(s.to_string()))
    }
}

// Cantor pairing of (number, primes) onto one natural, so every index has
// exactly one printed spelling.
fn pair(n: u64, p: u64) -> Option<u64> {
    let s = n.checked_add(p)?;
    let tri = s.checked_mul(s.checked_add(1)?)? / 2;
    tri.checked_add(p)
}

fn unpair(m: u64) -> (u64, u64) {
    let mut s = (((8.0 * m as f64 + 1.0).sqrt() - 1.0) / 2.0) as u64;
    while s * (s + 1) / 2 > m {
        s -= 1;
    }
    while (s + 1) * (s + 2) / 2 <= m {
        s += 1;
    }
    let p = m - s * (s + 1) / 2;
    (s - p, p)
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("a swapping needs two distinct atoms, got {0} twice")]
pub struct SwapError(pub Atom);

/// A finite permutation of atoms, stored as its nontrivial graph.
///
/// Canonical form: no entry maps an atom to itself, and the map is a
/// bijection whose domain and range coincide, so structural equality is
/// extensional equality.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Permutation {
    map: BTreeMap<Atom, Atom>,
}

impl Permutation {
    pub fn identity() -> Self {
        Permutation::default()
    }

    /// The swapping `(a b)`.
    pub fn swap(a: Atom, b: Atom) -> Result<Self, SwapError> {
        if a == b {
            return Err(SwapError(a));
        }
        let mut map = BTreeMap::new();
        map.insert(a, b);
        map.insert(b, a);
        Ok(Permutation { map })
    }

    pub fn apply(&self, a: Atom) -> Atom {
        self.map.get(&a).copied().unwrap_or(a)
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        let mut map = BTreeMap::new();
        for &a in self.map.keys().chain(other.map.keys()) {
            let b = self.apply(other.apply(a));
            if b != a {
                map.insert(a, b);
            }
        }
        Permutation { map }
    }

    pub fn inverse(&self) -> Permutation {
        let map = self.map.iter().map(|(&a, &b)| (b, a)).collect();
        Permutation { map }
    }

    /// The atoms moved by the permutation; always finite.
    pub fn nontriv(&self) -> BTreeSet<Atom> {
        self.map.keys().copied().collect()
    }

    pub fn is_identity(&self) -> bool {
        self.map.is_empty()
    }

    /// Whether `nontriv(self)` lies in the up sort, the condition required
    /// for the permutation action on terms.
    pub fn moves_only_up(&self) -> bool {
        self.map.keys().all(|a| a.is_up())
    }

    /// Factor into swappings such that `self = s[0] ∘ s[1] ∘ ... ∘ s[k-1]`
    /// (the last swap in the list acts first).
    pub fn as_swaps(&self) -> Vec<(Atom, Atom)> {
        let mut seen = BTreeSet::new();
        let mut swaps = Vec::new();
        for &start in self.map.keys() {
            if seen.contains(&start) {
                continue;
            }
            let mut cycle = vec![start];
            seen.insert(start);
            let mut cur = self.apply(start);
            while cur != start {
                cycle.push(cur);
                seen.insert(cur);
                cur = self.apply(cur);
            }
            // (a1 a2 .. ak) = (a1 ak) ∘ ... ∘ (a1 a2)
            for i in (1..cycle.len()).rev() {
                swaps.push((cycle[0], cycle[i]));
            }
        }
        swaps
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("id");
        }
        for (a, b) in self.as_swaps() {
            write!(f, "({a} {b})")?;
        }
        Ok(())
    }
}

/// A set of atoms that is either finite or cofinite on the down sort.
///
/// `CofiniteDown` denotes `(A↓ \ excluded_down) ∪ extra_up`. Complements of
/// up-cofinite sets never arise from free-atom computations and are not
/// representable.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum AtomSet {
    Finite(BTreeSet<Atom>),
    CofiniteDown {
        excluded_down: BTreeSet<Atom>,
        extra_up: BTreeSet<Atom>,
    },
}

impl AtomSet {
    pub fn empty() -> Self {
        AtomSet::Finite(BTreeSet::new())
    }

    pub fn singleton(a: Atom) -> Self {
        AtomSet::Finite(BTreeSet::from([a]))
    }

    pub fn finite(atoms: impl IntoIterator<Item = Atom>) -> Self {
        AtomSet::Finite(atoms.into_iter().collect())
    }

    /// The whole down sort.
    pub fn all_down() -> Self {
        AtomSet::CofiniteDown {
            excluded_down: BTreeSet::new(),
            extra_up: BTreeSet::new(),
        }
    }

    pub fn cofinite_down(
        excluded_down: impl IntoIterator<Item = Atom>,
        extra_up: impl IntoIterator<Item = Atom>,
    ) -> Self {
        let excluded_down: BTreeSet<Atom> = excluded_down.into_iter().collect();
        let extra_up: BTreeSet<Atom> = extra_up.into_iter().collect();
        assert!(
            excluded_down.iter().all(|a| a.is_down()),
            "excluded_down must contain only down atoms"
        );
        assert!(
            extra_up.iter().all(|a| a.is_up()),
            "extra_up must contain only up atoms"
        );
        AtomSet::CofiniteDown {
            excluded_down,
            extra_up,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, AtomSet::Finite(_))
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, AtomSet::Finite(s) if s.is_empty())
    }

    pub fn contains(&self, a: Atom) -> bool {
        match self {
            AtomSet::Finite(s) => s.contains(&a),
            AtomSet::CofiniteDown {
                excluded_down,
                extra_up,
            } => {
                if a.is_down() {
                    !excluded_down.contains(&a)
                } else {
                    extra_up.contains(&a)
                }
            }
        }
    }

    pub fn union(&self, other: &AtomSet) -> AtomSet {
        use AtomSet::*;
        match (self, other) {
            (Finite(x), Finite(y)) => Finite(x.union(y).copied().collect()),
            (Finite(x), CofiniteDown { excluded_down, extra_up })
            | (CofiniteDown { excluded_down, extra_up }, Finite(x)) => CofiniteDown {
                excluded_down: excluded_down.iter().copied().filter(|a| !x.contains(a)).collect(),
                extra_up: extra_up
                    .iter()
                    .copied()
                    .chain(x.iter().copied().filter(|a| a.is_up()))
                    .collect(),
            },
            (
                CofiniteDown { excluded_down: e1, extra_up: u1 },
                CofiniteDown { excluded_down: e2, extra_up: u2 },
            ) => CofiniteDown {
                excluded_down: e1.intersection(e2).copied().collect(),
                extra_up: u1.union(u2).copied().collect(),
            },
        }
    }

    pub fn insert(&self, a: Atom) -> AtomSet {
        self.union(&AtomSet::singleton(a))
    }

    pub fn remove(&self, a: Atom) -> AtomSet {
        match self {
            AtomSet::Finite(s) => {
                let mut s = s.clone();
                s.remove(&a);
                AtomSet::Finite(s)
            }
            AtomSet::CofiniteDown {
                excluded_down,
                extra_up,
            } => {
                let mut excluded_down = excluded_down.clone();
                let mut extra_up = extra_up.clone();
                if a.is_down() {
                    excluded_down.insert(a);
                } else {
                    extra_up.remove(&a);
                }
                AtomSet::CofiniteDown {
                    excluded_down,
                    extra_up,
                }
            }
        }
    }

    pub fn is_subset(&self, other: &AtomSet) -> bool {
        use AtomSet::*;
        match (self, other) {
            (Finite(x), _) => x.iter().all(|&a| other.contains(a)),
            (CofiniteDown { .. }, Finite(_)) => false,
            (
                CofiniteDown { excluded_down: e1, extra_up: u1 },
                CofiniteDown { excluded_down: e2, extra_up: u2 },
            ) => e2.is_subset(e1) && u1.is_subset(u2),
        }
    }

    /// The up-sorted members; finite in both variants.
    pub fn up_members(&self) -> BTreeSet<Atom> {
        match self {
            AtomSet::Finite(s) => s.iter().copied().filter(|a| a.is_up()).collect(),
            AtomSet::CofiniteDown { extra_up, .. } => extra_up.clone(),
        }
    }

    /// Apply a permutation pointwise. For the cofinite variant the
    /// permutation must have `nontriv(pi) ⊆ A↑`, which keeps the down part
    /// representable.
    pub fn permute(&self, pi: &Permutation) -> AtomSet {
        match self {
            AtomSet::Finite(s) => AtomSet::Finite(s.iter().map(|&a| pi.apply(a)).collect()),
            AtomSet::CofiniteDown {
                excluded_down,
                extra_up,
            } => {
                assert!(
                    pi.moves_only_up(),
                    "cofinite atom sets only support up-sorted permutations"
                );
                AtomSet::CofiniteDown {
                    excluded_down: excluded_down.clone(),
                    extra_up: extra_up.iter().map(|&a| pi.apply(a)).collect(),
                }
            }
        }
    }
}

/// The up atom of least index not in `avoid`. Total: the up part of any
/// `AtomSet` is finite.
pub fn fresh_up(avoid: &AtomSet) -> Atom {
    let used: BTreeSet<u64> = avoid.up_members().iter().map(|a| a.index()).collect();
    let mut i = 0;
    while used.contains(&i) {
        i += 1;
    }
    Atom::up(i)
}

/// The down atom of least index not in `avoid`, if one exists. `None` only
/// when `avoid` is cofinite with nothing excluded.
pub fn fresh_down(avoid: &AtomSet) -> Option<Atom> {
    match avoid {
        AtomSet::Finite(s) => {
            let used: BTreeSet<u64> = s.iter().filter(|a| a.is_down()).map(|a| a.index()).collect();
            let mut i = 0;
            while used.contains(&i) {
                i += 1;
            }
            Some(Atom::down(i))
        }
        AtomSet::CofiniteDown { excluded_down, .. } => excluded_down.iter().next().copied(),
    }
}
