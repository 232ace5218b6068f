//! Seeded random generators. Typed-term generation is re-exported from the
//! kernel's sampling module; everything else here builds on the public
//! kernel API only.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use holc_core::atoms::{fresh_up, Atom, AtomSet, Permutation, Sort};
use holc_core::subst::SubstL1;
use holc_core::syntax::{free_atoms, perm_act, SimpleType, Signature, Term};
use holc_core::typing::Context;

pub use holc_core::models::sampling::{
    random_context, random_context_atom, random_term_of_type, random_type, GenCfg,
};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_atom<R: Rng>(rng: &mut R, max_index: u64) -> Atom {
    let sort = if rng.random_bool(0.5) { Sort::Up } else { Sort::Down };
    Atom::new(sort, rng.random_range(0..=max_index))
}

/// A product of random up-sorted swaps.
pub fn random_up_permutation<R: Rng>(rng: &mut R, max_index: u64, swaps: usize) -> Permutation {
    let mut pi = Permutation::identity();
    for _ in 0..swaps {
        let i = rng.random_range(0..=max_index);
        let j = rng.random_range(0..=max_index);
        if i != j {
            pi = pi.compose(&Permutation::swap(Atom::up(i), Atom::up(j)).unwrap());
        }
    }
    pi
}

/// A product of random swaps over both sorts (sort-mixing allowed).
pub fn random_any_permutation<R: Rng>(rng: &mut R, max_index: u64, swaps: usize) -> Permutation {
    let mut pi = Permutation::identity();
    for _ in 0..swaps {
        let a = random_atom(rng, max_index);
        let b = random_atom(rng, max_index);
        if a != b {
            pi = pi.compose(&Permutation::swap(a, b).unwrap());
        }
    }
    pi
}

pub fn random_atomset<R: Rng>(rng: &mut R, max_index: u64) -> AtomSet {
    let draw = |rng: &mut R, sort: Sort| -> Vec<Atom> {
        let n = rng.random_range(0..4usize);
        (0..n)
            .map(|_| Atom::new(sort, rng.random_range(0..=max_index)))
            .collect()
    };
    if rng.random_bool(0.5) {
        let mut atoms = draw(rng, Sort::Up);
        atoms.extend(draw(rng, Sort::Down));
        AtomSet::finite(atoms)
    } else {
        AtomSet::cofinite_down(draw(rng, Sort::Down), draw(rng, Sort::Up))
    }
}

/// A well-formed but not necessarily typable term, for the syntax-level
/// properties.
pub fn random_term_untyped<R: Rng>(rng: &mut R, depth: usize, max_index: u64) -> Term {
    let leaf = |rng: &mut R| -> Term {
        match rng.random_range(0..4u32) {
            0 => Term::atom(Atom::up(rng.random_range(0..=max_index))),
            1 => Term::atom(Atom::down(rng.random_range(0..=max_index))),
            2 => Term::constant("C"),
            _ => Term::unknown(["X", "Y"][rng.random_range(0..2usize)]),
        }
    };
    if depth == 0 {
        return leaf(rng);
    }
    match rng.random_range(0..6u32) {
        0 | 1 => leaf(rng),
        2 => Term::lam(
            Atom::up(rng.random_range(0..=max_index)),
            SimpleType::base("t"),
            random_term_untyped(rng, depth - 1, max_index),
        ),
        3 | 4 => Term::app(
            random_term_untyped(rng, depth - 1, max_index),
            random_term_untyped(rng, depth - 1, max_index),
        ),
        _ => {
            let mut domain: Vec<u64> = (0..=max_index).collect();
            domain.shuffle(rng);
            let k = rng.random_range(0..=2usize.min(domain.len()));
            let mods = domain[..k]
                .iter()
                .map(|&i| (Atom::down(i), random_term_untyped(rng, depth - 1, max_index)))
                .collect();
            Term::moderated(["X", "Y"][rng.random_range(0..2usize)], mods)
        }
    }
}

/// An alpha-equivalent variant: binders are randomly renamed to fresh atoms
/// and moderation entries reshuffled.
pub fn alpha_variant<R: Rng>(rng: &mut R, t: &Term) -> Term {
    match t {
        Term::Atom(_) | Term::Const(_) => t.clone(),
        Term::App(f, x) => Term::app(alpha_variant(rng, f), alpha_variant(rng, x)),
        Term::Lam { binder, ty, body } => {
            let body = alpha_variant(rng, body);
            if rng.random_bool(0.5) {
                let fresh = fresh_up(&free_atoms(&body).insert(*binder));
                let swapped = perm_act(&Permutation::swap(fresh, *binder).unwrap(), &body)
                    .expect("up-sorted swap");
                Term::lam(fresh, ty.clone(), swapped)
            } else {
                Term::lam(*binder, ty.clone(), body)
            }
        }
        Term::Unk { name, mods } => {
            let mut mods: Vec<(Atom, Term)> = mods
                .iter()
                .map(|(b, s)| (*b, alpha_variant(rng, s)))
                .collect();
            mods.shuffle(rng);
            Term::moderated(name.clone(), mods)
        }
    }
}

/// A level-1 substitution whose domain atoms come from the context and whose
/// ranges are typed at the matching types, as in the typed substitution
/// lemma.
pub fn random_typed_subst<R: Rng>(
    rng: &mut R,
    sig: &Signature,
    ctx: &Context,
    cfg: &GenCfg,
    max_entries: usize,
) -> SubstL1 {
    let mut atoms: Vec<(Atom, SimpleType)> = ctx.atoms().map(|(a, ty)| (a, ty.clone())).collect();
    atoms.shuffle(rng);
    let k = rng.random_range(0..=max_entries.min(atoms.len()));
    SubstL1::from_pairs(atoms.into_iter().take(k).map(|(a, ty)| {
        let size = rng.random_range(1..=6usize);
        (a, random_term_of_type(rng, sig, ctx, &ty, size, cfg))
    }))
}
