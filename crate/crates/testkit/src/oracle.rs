//! Independent oracles.
//!
//! `DbTerm` is a locally nameless rendering of a term: bound up atoms become
//! indices, everything else stays named. Structural equality of `DbTerm`s
//! decides alpha-equivalence without touching the kernel's fresh-swap
//! comparison. `joinable` decides beta-equivalence of small typed terms by
//! brute-force search over all reduction sequences rather than by
//! normal-form comparison.

use std::collections::BTreeSet;

use holc_core::atoms::Atom;
use holc_core::subst::{subst_l1, SubstL1};
use holc_core::syntax::{SimpleType, Term, UnknownName};

/// Locally nameless image of a term. Bound occurrences carry the distance
/// to their binder; free atoms keep their identity.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum DbTerm {
    Free(Atom),
    Bound(usize),
    Const(String),
    Lam(SimpleType, Box<DbTerm>),
    App(Box<DbTerm>, Box<DbTerm>),
    Unk(UnknownName, Vec<(Atom, DbTerm)>),
}

pub fn to_db(t: &Term) -> DbTerm {
    fn go(t: &Term, env: &mut Vec<Atom>) -> DbTerm {
        match t {
            Term::Atom(a) => match env.iter().rev().position(|b| b == a) {
                Some(i) => DbTerm::Bound(i),
                None => DbTerm::Free(*a),
            },
            Term::Const(c) => DbTerm::Const(c.clone()),
            Term::Lam { binder, ty, body } => {
                env.push(*binder);
                let body = go(body, env);
                env.pop();
                DbTerm::Lam(ty.clone(), Box::new(body))
            }
            Term::App(f, x) => DbTerm::App(Box::new(go(f, env)), Box::new(go(x, env))),
            Term::Unk { name, mods } => {
                let mut mods: Vec<(Atom, DbTerm)> =
                    mods.iter().map(|(b, s)| (*b, go(s, env))).collect();
                mods.sort_by_key(|(b, _)| *b);
                DbTerm::Unk(name.clone(), mods)
            }
        }
    }
    go(t, &mut Vec::new())
}

/// Alpha-equivalence by comparison of locally nameless images.
pub fn alpha_eq_oracle(r: &Term, s: &Term) -> bool {
    to_db(r) == to_db(s)
}

/// Every term reachable by contracting one redex anywhere, including inside
/// moderation ranges.
pub fn one_step_reducts(t: &Term) -> Vec<Term> {
    let mut out = Vec::new();
    if let Term::App(f, x) = t {
        if let Term::Lam { binder, body, .. } = &**f {
            out.push(subst_l1(body, &SubstL1::single(*binder, (**x).clone())));
        }
    }
    match t {
        Term::Atom(_) | Term::Const(_) => {}
        Term::Lam { binder, ty, body } => {
            for b in one_step_reducts(body) {
                out.push(Term::lam(*binder, ty.clone(), b));
            }
        }
        Term::App(f, x) => {
            for f2 in one_step_reducts(f) {
                out.push(Term::app(f2, (**x).clone()));
            }
            for x2 in one_step_reducts(x) {
                out.push(Term::app((**f).clone(), x2));
            }
        }
        Term::Unk { name, mods } => {
            for (i, (b, s)) in mods.iter().enumerate() {
                for s2 in one_step_reducts(s) {
                    let mut mods = mods.clone();
                    mods[i] = (*b, s2);
                    out.push(Term::Unk {
                        name: name.clone(),
                        mods,
                    });
                }
            }
        }
    }
    out
}

/// All alpha-classes reachable within `depth` contractions, capped at `cap`
/// classes.
pub fn reachable_classes(t: &Term, depth: usize, cap: usize) -> BTreeSet<DbTerm> {
    let mut seen = BTreeSet::new();
    seen.insert(to_db(t));
    let mut frontier = vec![t.clone()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for u in frontier {
            for v in one_step_reducts(&u) {
                if seen.insert(to_db(&v)) {
                    if seen.len() >= cap {
                        return seen;
                    }
                    next.push(v);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    seen
}

/// Brute-force joinability: some common reduct within the bounded search.
pub fn joinable(r: &Term, s: &Term, depth: usize, cap: usize) -> bool {
    let left = reachable_classes(r, depth, cap);
    let right = reachable_classes(s, depth, cap);
    left.intersection(&right).next().is_some()
}
