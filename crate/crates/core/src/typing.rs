//! Typing contexts and the derivability relation for terms with holes.
//!
//! The rules are syntax-directed, so `infer` synthesizes the unique type or
//! reports a structured error naming the failing rule and the offending
//! subterm position. In the Meta rule both the unknown and every moderation
//! domain atom must be typed in the context, and each stored range must have
//! its domain atom's type. The hole-free fragment is the same engine with
//! unknowns rejected.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::atoms::{fresh_up, Atom, Permutation};
use crate::syntax::{free_atoms, swap_up, PathStep, Signature, SimpleType, Term, TermPath, UnknownName};

/// A functional set of atomic typings for atoms and unknowns.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Context {
    atoms: BTreeMap<Atom, SimpleType>,
    unknowns: BTreeMap<UnknownName, SimpleType>,
}

impl Context {
    pub fn new() -> Self {
        Context::default()
    }

    pub fn with_atom(mut self, a: Atom, ty: SimpleType) -> Self {
        self.atoms.insert(a, ty);
        self
    }

    pub fn with_unknown(mut self, x: impl Into<UnknownName>, ty: SimpleType) -> Self {
        self.unknowns.insert(x.into(), ty);
        self
    }

    pub fn insert_atom(&mut self, a: Atom, ty: SimpleType) {
        self.atoms.insert(a, ty);
    }

    pub fn insert_unknown(&mut self, x: impl Into<UnknownName>, ty: SimpleType) {
        self.unknowns.insert(x.into(), ty);
    }

    pub fn remove_atom(&mut self, a: Atom) {
        self.atoms.remove(&a);
    }

    pub fn remove_unknown(&mut self, x: &UnknownName) {
        self.unknowns.remove(x);
    }

    pub fn atom_type(&self, a: Atom) -> Option<&SimpleType> {
        self.atoms.get(&a)
    }

    pub fn unknown_type(&self, x: &UnknownName) -> Option<&SimpleType> {
        self.unknowns.get(x)
    }

    pub fn has_atom(&self, a: Atom) -> bool {
        self.atoms.contains_key(&a)
    }

    pub fn atoms(&self) -> impl Iterator<Item = (Atom, &SimpleType)> {
        self.atoms.iter().map(|(&a, t)| (a, t))
    }

    pub fn unknowns(&self) -> impl Iterator<Item = (&UnknownName, &SimpleType)> {
        self.unknowns.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty() && self.unknowns.is_empty()
    }

    /// The atom part of the domain as an `AtomSet`.
    pub fn atom_domain(&self) -> crate::atoms::AtomSet {
        crate::atoms::AtomSet::finite(self.atoms.keys().copied())
    }

    /// `pi·Γ` renames the atom typings; unknown typings are untouched.
    /// Requires `nontriv(pi) ⊆ A↑` to mirror the action on terms.
    pub fn permute(&self, pi: &Permutation) -> Context {
        assert!(pi.moves_only_up());
        Context {
            atoms: self
                .atoms
                .iter()
                .map(|(&a, ty)| (pi.apply(a), ty.clone()))
                .collect(),
            unknowns: self.unknowns.clone(),
        }
    }

    /// Merge two contexts; `None` if they disagree on some typing.
    pub fn merged(&self, other: &Context) -> Option<Context> {
        let mut out = self.clone();
        for (a, ty) in other.atoms.iter() {
            if let Some(prev) = out.atoms.insert(*a, ty.clone()) {
                if prev != *ty {
                    return None;
                }
            }
        }
        for (x, ty) in other.unknowns.iter() {
            if let Some(prev) = out.unknowns.insert(x.clone(), ty.clone()) {
                if prev != *ty {
                    return None;
                }
            }
        }
        Some(out)
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum TypeErrorKind {
    #[error("atom {0} is not typed in the context")]
    UnboundAtom(Atom),
    #[error("constant {0} is not declared in the signature")]
    UndeclaredConstant(String),
    #[error("unknown {0} is not typed in the context")]
    UnboundUnknown(UnknownName),
    #[error("moderation domain atom {0} is not typed in the context")]
    UntypedModerationDomain(Atom),
    #[error("moderation range for {atom} has type {found}, expected {expected}")]
    ModerationRangeMismatch {
        atom: Atom,
        expected: SimpleType,
        found: SimpleType,
    },
    #[error("cannot apply a term of type {fun_ty} to an argument of type {arg_ty}")]
    AppMismatch {
        fun_ty: SimpleType,
        arg_ty: SimpleType,
    },
    #[error("unknowns are not allowed in the hole-free fragment")]
    UnknownInHoleFreeTerm(UnknownName),
}

/// A typing failure together with the path to the subterm that caused it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TypeError {
    pub kind: TypeErrorKind,
    pub path: TermPath,
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (at {})", self.kind, self.path)
    }
}

impl std::error::Error for TypeError {}

fn err(kind: TypeErrorKind, path: &TermPath) -> TypeError {
    TypeError {
        kind,
        path: path.clone(),
    }
}

/// Synthesize the unique type of `r` under `ctx`, or fail. If a lambda
/// binder is already typed in the context the binder is renamed to a fresh
/// up atom first, so inference is total on alpha-classes.
pub fn infer(sig: &Signature, ctx: &Context, r: &Term) -> Result<SimpleType, TypeError> {
    infer_at(sig, ctx, r, &TermPath::root(), true)
}

/// The hole-free (Figure 1 style) relation: as `infer` but any unknown is an
/// error.
pub fn infer_hole_free(sig: &Signature, ctx: &Context, r: &Term) -> Result<SimpleType, TypeError> {
    infer_at(sig, ctx, r, &TermPath::root(), false)
}

fn infer_at(
    sig: &Signature,
    ctx: &Context,
    r: &Term,
    path: &TermPath,
    allow_unknowns: bool,
) -> Result<SimpleType, TypeError> {
    match r {
        Term::Atom(a) => ctx
            .atom_type(*a)
            .cloned()
            .ok_or_else(|| err(TypeErrorKind::UnboundAtom(*a), path)),
        Term::Const(c) => sig
            .constant_type(c)
            .cloned()
            .ok_or_else(|| err(TypeErrorKind::UndeclaredConstant(c.clone()), path)),
        Term::App(f, x) => {
            let fun_ty = infer_at(sig, ctx, f, &path.child(PathStep::AppFun), allow_unknowns)?;
            let arg_ty = infer_at(sig, ctx, x, &path.child(PathStep::AppArg), allow_unknowns)?;
            match fun_ty.as_arrow() {
                Some((dom, cod)) if *dom == arg_ty => Ok(cod.clone()),
                _ => Err(err(TypeErrorKind::AppMismatch { fun_ty, arg_ty }, path)),
            }
        }
        Term::Lam { binder, ty, body } => {
            let (binder, body) = if ctx.has_atom(*binder) {
                let avoid = ctx.atom_domain().union(&free_atoms(body)).insert(*binder);
                let fresh = fresh_up(&avoid);
                (fresh, swap_up(fresh, *binder, body))
            } else {
                (*binder, (**body).clone())
            };
            let inner = ctx.clone().with_atom(binder, ty.clone());
            let cod = infer_at(sig, &inner, &body, &path.child(PathStep::LamBody), allow_unknowns)?;
            Ok(SimpleType::arrow(ty.clone(), cod))
        }
        Term::Unk { name, mods } => {
            if !allow_unknowns {
                return Err(err(TypeErrorKind::UnknownInHoleFreeTerm(name.clone()), path));
            }
            let ty = ctx
                .unknown_type(name)
                .cloned()
                .ok_or_else(|| err(TypeErrorKind::UnboundUnknown(name.clone()), path))?;
            for (b, s) in mods {
                let expected = ctx
                    .atom_type(*b)
                    .cloned()
                    .ok_or_else(|| err(TypeErrorKind::UntypedModerationDomain(*b), path))?;
                let found = infer_at(sig, ctx, s, &path.child(PathStep::ModRange(*b)), allow_unknowns)?;
                if found != expected {
                    return Err(err(
                        TypeErrorKind::ModerationRangeMismatch {
                            atom: *b,
                            expected,
                            found,
                        },
                        path,
                    ));
                }
            }
            Ok(ty)
        }
    }
}

/// True iff `infer` succeeds with exactly `ty`.
pub fn check(sig: &Signature, ctx: &Context, r: &Term, ty: &SimpleType) -> bool {
    infer(sig, ctx, r).as_ref() == Ok(ty)
}
