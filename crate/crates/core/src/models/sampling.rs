//! Seeded random generation of types, contexts, and typed terms.
//!
//! Used by the term model to sample axiom cells and by the property suites.
//! Generated contexts type at least one up and one down atom at every base
//! type, so every type is inhabited and generation always bottoms out.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::atoms::{fresh_up, Atom, AtomSet};
use crate::syntax::{Signature, SimpleType, Term, UnknownName};
use crate::typing::Context;

#[derive(Clone, Copy, Debug)]
pub struct GenCfg {
    pub max_size: usize,
    pub max_atom_index: u64,
    pub allow_unknowns: bool,
    /// Restrict free atom leaves to the down sort (binders stay usable);
    /// the generated term then has down-sorted free atoms.
    pub down_free_atoms_only: bool,
}

impl Default for GenCfg {
    fn default() -> Self {
        GenCfg {
            max_size: 20,
            max_atom_index: 8,
            allow_unknowns: false,
            down_free_atoms_only: false,
        }
    }
}

pub fn pick<'a, T, R: Rng>(rng: &mut R, items: &'a [T]) -> Option<&'a T> {
    if items.is_empty() {
        None
    } else {
        Some(&items[rng.random_range(0..items.len())])
    }
}

pub fn random_base_type<R: Rng>(rng: &mut R, sig: &Signature) -> SimpleType {
    let bases: Vec<&str> = sig.base_types().collect();
    SimpleType::base(*pick(rng, &bases).expect("signature has a base type"))
}

/// A random type of arrow depth at most `depth`.
pub fn random_type<R: Rng>(rng: &mut R, sig: &Signature, depth: usize) -> SimpleType {
    if depth == 0 || rng.random_range(0..3) > 0 {
        random_base_type(rng, sig)
    } else {
        SimpleType::arrow(
            random_type(rng, sig, depth - 1),
            random_type(rng, sig, depth - 1),
        )
    }
}

/// A random context typing one up and one down atom at every base type,
/// a few extra atoms at random types, and (when unknowns are enabled) a
/// couple of unknowns.
pub fn random_context<R: Rng>(rng: &mut R, sig: &Signature, cfg: &GenCfg) -> Context {
    let span = cfg.max_atom_index + 1;
    let mut up_indices: Vec<u64> = (0..span).collect();
    let mut down_indices: Vec<u64> = (0..span).collect();
    up_indices.shuffle(rng);
    down_indices.shuffle(rng);
    let mut up_indices = up_indices.into_iter();
    let mut down_indices = down_indices.into_iter();

    let mut ctx = Context::new();
    for base in sig.base_types() {
        if let Some(i) = up_indices.next() {
            ctx.insert_atom(Atom::up(i), SimpleType::base(base));
        }
        if let Some(i) = down_indices.next() {
            ctx.insert_atom(Atom::down(i), SimpleType::base(base));
        }
    }
    for _ in 0..rng.random_range(0..3u32) {
        if let Some(i) = up_indices.next() {
            ctx.insert_atom(Atom::up(i), random_type(rng, sig, 2));
        }
    }
    for _ in 0..rng.random_range(0..3u32) {
        if let Some(i) = down_indices.next() {
            ctx.insert_atom(Atom::down(i), random_type(rng, sig, 2));
        }
    }
    if cfg.allow_unknowns {
        let count = rng.random_range(1..=3usize);
        for name in ["X", "Y", "Z"].iter().take(count) {
            ctx.insert_unknown(UnknownName::new(*name), random_type(rng, sig, 1));
        }
    }
    ctx
}

/// A uniformly chosen atom typing from the context, which must type at
/// least one atom.
pub fn random_context_atom<R: Rng>(rng: &mut R, ctx: &Context) -> (Atom, SimpleType) {
    let atoms: Vec<(Atom, SimpleType)> = ctx.atoms().map(|(a, ty)| (a, ty.clone())).collect();
    pick(rng, &atoms).expect("context types an atom").clone()
}

/// A random term typed at `ty` under `ctx` with at most `size` nodes
/// (oversize draws are retried; a handful of extra nodes can appear only
/// when `size` is below the smallest inhabitant of `ty`).
///
/// Panics if some base type reachable from `ty` has no atom or constant in
/// scope; contexts from [`random_context`] always do.
pub fn random_term_of_type<R: Rng>(
    rng: &mut R,
    sig: &Signature,
    ctx: &Context,
    ty: &SimpleType,
    size: usize,
    cfg: &GenCfg,
) -> Term {
    let mut best: Option<Term> = None;
    for _ in 0..64 {
        let mut fuel = size as isize;
        let t = gen(rng, sig, ctx, ty, &mut fuel, cfg, &BTreeSet::new());
        if t.size() <= size {
            return t;
        }
        if best.as_ref().is_none_or(|b| t.size() < b.size()) {
            best = Some(t);
        }
    }
    best.expect("at least one draw")
}

fn atom_usable(a: Atom, cfg: &GenCfg, bound: &BTreeSet<Atom>) -> bool {
    !cfg.down_free_atoms_only || a.is_down() || bound.contains(&a)
}

fn gen<R: Rng>(
    rng: &mut R,
    sig: &Signature,
    ctx: &Context,
    ty: &SimpleType,
    fuel: &mut isize,
    cfg: &GenCfg,
    bound: &BTreeSet<Atom>,
) -> Term {
    *fuel -= 1;

    let atom_leaves: Vec<Atom> = ctx
        .atoms()
        .filter(|(a, aty)| *aty == ty && atom_usable(*a, cfg, bound))
        .map(|(a, _)| a)
        .collect();
    let const_leaves: Vec<String> = sig
        .constants()
        .filter(|(_, cty)| *cty == ty)
        .map(|(n, _)| n.to_string())
        .collect();

    #[derive(Clone, Copy)]
    enum Shape {
        AtomLeaf,
        ConstLeaf,
        Lam,
        App,
        Unk,
    }

    let mut options: Vec<(Shape, u32)> = Vec::new();
    if !atom_leaves.is_empty() {
        options.push((Shape::AtomLeaf, 3));
    }
    if !const_leaves.is_empty() {
        options.push((Shape::ConstLeaf, 2));
    }
    if *fuel > 0 && ty.as_arrow().is_some() {
        options.push((Shape::Lam, 4));
    }
    if *fuel > 3 {
        options.push((Shape::App, 3));
        if cfg.allow_unknowns {
            let has_unknown = ctx.unknowns().any(|(_, uty)| uty == ty);
            if has_unknown {
                options.push((Shape::Unk, 3));
            }
        }
    }
    if options.is_empty() {
        // out of fuel at an arrow type with no leaf: eta-expand our way down
        if ty.as_arrow().is_some() {
            options.push((Shape::Lam, 1));
        } else {
            panic!("no inhabitant in scope for base type {ty}");
        }
    }

    let total: u32 = options.iter().map(|(_, w)| w).sum();
    let mut roll = rng.random_range(0..total);
    let mut shape = options[0].0;
    for (s, w) in &options {
        if roll < *w {
            shape = *s;
            break;
        }
        roll -= w;
    }

    match shape {
        Shape::AtomLeaf => Term::atom(*pick(rng, &atom_leaves).unwrap()),
        Shape::ConstLeaf => Term::constant(pick(rng, &const_leaves).unwrap().clone()),
        Shape::Lam => {
            let (dom, cod) = ty.as_arrow().unwrap();
            let binder = fresh_up(
                &ctx.atom_domain()
                    .union(&AtomSet::finite(bound.iter().copied())),
            );
            let inner = ctx.clone().with_atom(binder, dom.clone());
            let mut bound = bound.clone();
            bound.insert(binder);
            Term::lam(binder, dom.clone(), gen(rng, sig, &inner, cod, fuel, cfg, &bound))
        }
        Shape::App => {
            // draw the argument type from types already inhabited in scope
            let mut pool: Vec<SimpleType> = vec![random_base_type(rng, sig)];
            for (a, aty) in ctx.atoms() {
                if atom_usable(a, cfg, bound) {
                    pool.push(aty.clone());
                }
            }
            let arg_ty = pick(rng, &pool).unwrap().clone();
            let fun_ty = SimpleType::arrow(arg_ty.clone(), ty.clone());
            let fun = gen(rng, sig, ctx, &fun_ty, fuel, cfg, bound);
            let arg = gen(rng, sig, ctx, &arg_ty, fuel, cfg, bound);
            Term::app(fun, arg)
        }
        Shape::Unk => {
            let unknowns: Vec<UnknownName> = ctx
                .unknowns()
                .filter(|(_, uty)| *uty == ty)
                .map(|(x, _)| x.clone())
                .collect();
            let name = pick(rng, &unknowns).unwrap().clone();
            let downs: Vec<(Atom, SimpleType)> = ctx
                .atoms()
                .filter(|(a, _)| a.is_down())
                .map(|(a, ty)| (a, ty.clone()))
                .collect();
            let want = rng.random_range(0..=2usize.min(downs.len()));
            let mut chosen: Vec<(Atom, SimpleType)> = downs;
            chosen.shuffle(rng);
            chosen.truncate(want);
            let mods = chosen
                .into_iter()
                .map(|(b, bty)| (b, gen(rng, sig, ctx, &bty, fuel, cfg, bound)))
                .collect();
            Term::moderated(name, mods)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::typing::infer;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_terms_are_typed_as_requested() {
        let sig = Signature::new(["t".to_string(), "u".to_string()])
            .unwrap()
            .with_constant("C", SimpleType::base("t"));
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let cfg = GenCfg {
            allow_unknowns: true,
            ..GenCfg::default()
        };
        for _ in 0..200 {
            let ctx = random_context(&mut rng, &sig, &cfg);
            let ty = random_type(&mut rng, &sig, 2);
            let term = random_term_of_type(&mut rng, &sig, &ctx, &ty, 15, &cfg);
            assert_eq!(infer(&sig, &ctx, &term), Ok(ty.clone()), "term {term:?}");
        }
    }

    #[test]
    fn down_only_generation_keeps_up_atoms_bound() {
        let sig = Signature::single_base("t");
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let cfg = GenCfg {
            down_free_atoms_only: true,
            allow_unknowns: true,
            ..GenCfg::default()
        };
        for _ in 0..200 {
            let ctx = random_context(&mut rng, &sig, &cfg);
            let ty = random_type(&mut rng, &sig, 1);
            let term = random_term_of_type(&mut rng, &sig, &ctx, &ty, 12, &cfg);
            let fa = crate::syntax::free_atoms(&term);
            assert!(
                fa.is_subset(&AtomSet::all_down()),
                "free atoms not down-sorted in {term:?}"
            );
        }
    }

    #[test]
    fn generation_is_deterministic_per_seed() {
        let sig = Signature::single_base("t");
        let cfg = GenCfg::default();
        let run = || {
            let mut rng = ChaCha8Rng::seed_from_u64(99);
            let ctx = random_context(&mut rng, &sig, &cfg);
            let ty = random_type(&mut rng, &sig, 2);
            random_term_of_type(&mut rng, &sig, &ctx, &ty, 18, &cfg)
        };
        assert_eq!(run(), run());
    }
}
