//! Types, terms with moderated unknowns, the permutation action, free
//! atoms/unknowns, and decidable alpha-equivalence.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::atoms::{fresh_up, Atom, AtomSet, Permutation, Sort};

/// Simple types over a set of base type names.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum SimpleType {
    Base(String),
    Arrow(Box<SimpleType>, Box<SimpleType>),
}

impl SimpleType {
    pub fn base(name: impl Into<String>) -> Self {
        SimpleType::Base(name.into())
    }

    pub fn arrow(dom: SimpleType, cod: SimpleType) -> Self {
        SimpleType::Arrow(Box::new(dom), Box::new(cod))
    }

    pub fn as_arrow(&self) -> Option<(&SimpleType, &SimpleType)> {
        match self {
            SimpleType::Arrow(d, c) => Some((d, c)),
            SimpleType::Base(_) => None,
        }
    }

    fn base_names(&self, out: &mut BTreeSet<String>) {
        match self {
            SimpleType::Base(n) => {
                out.insert(n.clone());
            }
            SimpleType::Arrow(d, c) => {
                d.base_names(out);
                c.base_names(out);
            }
        }
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimpleType::Base(n) => f.write_str(n),
            SimpleType::Arrow(d, c) => {
                if d.as_arrow().is_some() {
                    write!(f, "({d})->{c}")
                } else {
                    write!(f, "{d}->{c}")
                }
            }
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SignatureError {
    #[error("a signature needs at least one base type")]
    EmptyBaseTypes,
    #[error("constant {constant} uses undeclared base type {base}")]
    UnknownBaseType { constant: String, base: String },
    #[error("constant {0} is declared twice")]
    DuplicateConstant(String),
}

/// Base types plus typed constants.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Signature {
    base_types: BTreeSet<String>,
    constants: std::collections::BTreeMap<String, SimpleType>,
}

impl Signature {
    pub fn new(base_types: impl IntoIterator<Item = String>) -> Result<Self, SignatureError> {
        let base_types: BTreeSet<String> = base_types.into_iter().collect();
        if base_types.is_empty() {
            return Err(SignatureError::EmptyBaseTypes);
        }
        Ok(Signature {
            base_types,
            constants: Default::default(),
        })
    }

    /// Convenience constructor for one base type `t`.
    pub fn single_base(name: &str) -> Self {
        Signature::new([name.to_string()]).expect("nonempty")
    }

    pub fn add_constant(&mut self, name: &str, ty: SimpleType) -> Result<(), SignatureError> {
        let mut bases = BTreeSet::new();
        ty.base_names(&mut bases);
        for base in bases {
            if !self.base_types.contains(&base) {
                return Err(SignatureError::UnknownBaseType {
                    constant: name.to_string(),
                    base,
                });
            }
        }
        if self.constants.contains_key(name) {
            return Err(SignatureError::DuplicateConstant(name.to_string()));
        }
        self.constants.insert(name.to_string(), ty);
        Ok(())
    }

    pub fn with_constant(mut self, name: &str, ty: SimpleType) -> Self {
        self.add_constant(name, ty).expect("valid constant");
        self
    }

    pub fn constant_type(&self, name: &str) -> Option<&SimpleType> {
        self.constants.get(name)
    }

    pub fn has_base_type(&self, name: &str) -> bool {
        self.base_types.contains(name)
    }

    pub fn base_types(&self) -> impl Iterator<Item = &str> {
        self.base_types.iter().map(|s| s.as_str())
    }

    pub fn constants(&self) -> impl Iterator<Item = (&str, &SimpleType)> {
        self.constants.iter().map(|(n, t)| (n.as_str(), t))
    }
}

/// A level-2 (existential) variable name. Distinct names denote distinct
/// unknowns.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct UnknownName(String);

impl UnknownName {
    pub fn new(name: impl Into<String>) -> Self {
        UnknownName(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for UnknownName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for UnknownName {
    fn from(s: &str) -> Self {
        UnknownName::new(s)
    }
}

/// Terms: atoms, constants, lambda over an up atom, application, and
/// moderated unknowns `X['b1:=s1, ...]`.
///
/// Invariants enforced by the constructors: lambda binders are up atoms and
/// moderation domains are pairwise distinct down atoms. A bare unknown is
/// the empty moderation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Term {
    Atom(Atom),
    Const(String),
    Lam {
        binder: Atom,
        ty: SimpleType,
        body: Box<Term>,
    },
    App(Box<Term>, Box<Term>),
    Unk {
        name: UnknownName,
        mods: Vec<(Atom, Term)>,
    },
}

impl Term {
    pub fn atom(a: Atom) -> Term {
        Term::Atom(a)
    }

    pub fn constant(name: impl Into<String>) -> Term {
        Term::Const(name.into())
    }

    pub fn lam(binder: Atom, ty: SimpleType, body: Term) -> Term {
        assert!(binder.is_up(), "lambda binder must be an up atom");
        Term::Lam {
            binder,
            ty,
            body: Box::new(body),
        }
    }

    pub fn app(fun: Term, arg: Term) -> Term {
        Term::App(Box::new(fun), Box::new(arg))
    }

    /// A bare unknown, i.e. the empty moderation.
    pub fn unknown(name: impl Into<UnknownName>) -> Term {
        Term::Unk {
            name: name.into(),
            mods: Vec::new(),
        }
    }

    pub fn moderated(name: impl Into<UnknownName>, mods: Vec<(Atom, Term)>) -> Term {
        let mut seen = BTreeSet::new();
        for (b, _) in &mods {
            assert!(b.is_down(), "moderation domain atoms must be down atoms");
            assert!(seen.insert(*b), "moderation domain atoms must be distinct");
        }
        Term::Unk {
            name: name.into(),
            mods,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Atom(_) | Term::Const(_) => 1,
            Term::Lam { body, .. } => 1 + body.size(),
            Term::App(f, x) => 1 + f.size() + x.size(),
            Term::Unk { mods, .. } => 1 + mods.iter().map(|(_, s)| s.size()).sum::<usize>(),
        }
    }

    pub fn is_hole_free(&self) -> bool {
        match self {
            Term::Atom(_) | Term::Const(_) => true,
            Term::Lam { body, .. } => body.is_hole_free(),
            Term::App(f, x) => f.is_hole_free() && x.is_hole_free(),
            Term::Unk { .. } => false,
        }
    }
}

/// One step into a term, used for reduction traces and type error locations.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PathStep {
    AppFun,
    AppArg,
    LamBody,
    ModRange(Atom),
}

/// A position in a term.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct TermPath(pub Vec<PathStep>);

impl TermPath {
    pub fn root() -> Self {
        TermPath::default()
    }

    pub fn child(&self, step: PathStep) -> Self {
        let mut steps = self.0.clone();
        steps.push(step);
        TermPath(steps)
    }
}

impl fmt::Display for TermPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("root");
        }
        let mut first = true;
        for step in &self.0 {
            if !first {
                f.write_str(".")?;
            }
            first = false;
            match step {
                PathStep::AppFun => f.write_str("fun")?,
                PathStep::AppArg => f.write_str("arg")?,
                PathStep::LamBody => f.write_str("body")?,
                PathStep::ModRange(a) => write!(f, "mod[{a}]")?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("permutation moves down atom {0}; the action on terms needs nontriv(pi) ⊆ A↑")]
pub struct DownMovedError(pub Atom);

/// The permutation action on terms. Requires `nontriv(pi) ⊆ A↑`: moderation
/// domains and down atoms are fixed, binders and up atoms are renamed.
pub fn perm_act(pi: &Permutation, r: &Term) -> Result<Term, DownMovedError> {
    if let Some(&a) = pi.nontriv().iter().find(|a| a.is_down()) {
        return Err(DownMovedError(a));
    }
    Ok(perm_act_up(pi, r))
}

pub(crate) fn perm_act_up(pi: &Permutation, r: &Term) -> Term {
    debug_assert!(pi.moves_only_up());
    match r {
        Term::Atom(a) => Term::Atom(pi.apply(*a)),
        Term::Const(c) => Term::Const(c.clone()),
        Term::Lam { binder, ty, body } => Term::Lam {
            binder: pi.apply(*binder),
            ty: ty.clone(),
            body: Box::new(perm_act_up(pi, body)),
        },
        Term::App(f, x) => Term::App(
            Box::new(perm_act_up(pi, f)),
            Box::new(perm_act_up(pi, x)),
        ),
        Term::Unk { name, mods } => Term::Unk {
            name: name.clone(),
            mods: mods
                .iter()
                .map(|(b, s)| (*b, perm_act_up(pi, s)))
                .collect(),
        },
    }
}

pub(crate) fn swap_up(a: Atom, b: Atom, r: &Term) -> Term {
    debug_assert!(a.is_up() && b.is_up());
    if a == b {
        return r.clone();
    }
    perm_act_up(&Permutation::swap(a, b).expect("distinct"), r)
}

/// Free atoms. Cofinite on the down sort for any term containing an unknown:
/// `fa(X[b_i:=s_i]) = (A↓ \ {b_i}) ∪ ⋃ fa(s_i)`.
pub fn free_atoms(r: &Term) -> AtomSet {
    match r {
        Term::Atom(a) => AtomSet::singleton(*a),
        Term::Const(_) => AtomSet::empty(),
        Term::Lam { binder, body, .. } => free_atoms(body).remove(*binder),
        Term::App(f, x) => free_atoms(f).union(&free_atoms(x)),
        Term::Unk { mods, .. } => {
            let mut out = AtomSet::cofinite_down(mods.iter().map(|(b, _)| *b), []);
            for (_, s) in mods {
                out = out.union(&free_atoms(s));
            }
            out
        }
    }
}

/// Free unknowns.
pub fn free_unknowns(r: &Term) -> BTreeSet<UnknownName> {
    fn go(r: &Term, out: &mut BTreeSet<UnknownName>) {
        match r {
            Term::Atom(_) | Term::Const(_) => {}
            Term::Lam { body, .. } => go(body, out),
            Term::App(f, x) => {
                go(f, out);
                go(x, out);
            }
            Term::Unk { name, mods } => {
                out.insert(name.clone());
                for (_, s) in mods {
                    go(s, out);
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    go(r, &mut out);
    out
}

/// Decides alpha-equivalence. At binders the comparison swaps both bodies to
/// a common fresh up atom; moderations compare as finite maps, so entry
/// order is irrelevant.
pub fn alpha_eq(r: &Term, s: &Term) -> bool {
    match (r, s) {
        (Term::Atom(a), Term::Atom(b)) => a == b,
        (Term::Const(c), Term::Const(d)) => c == d,
        (Term::App(f1, x1), Term::App(f2, x2)) => alpha_eq(f1, f2) && alpha_eq(x1, x2),
        (
            Term::Lam { binder: a, ty: ta, body: ra },
            Term::Lam { binder: b, ty: tb, body: sb },
        ) => {
            if ta != tb {
                return false;
            }
            if a == b {
                return alpha_eq(ra, sb);
            }
            let avoid = free_atoms(ra)
                .union(&free_atoms(sb))
                .insert(*a)
                .insert(*b);
            let c = fresh_up(&avoid);
            alpha_eq(&swap_up(c, *a, ra), &swap_up(c, *b, sb))
        }
        (Term::Unk { name: x, mods: ms }, Term::Unk { name: y, mods: ns }) => {
            if x != y || ms.len() != ns.len() {
                return false;
            }
            let dom: BTreeSet<Atom> = ms.iter().map(|(b, _)| *b).collect();
            let dom2: BTreeSet<Atom> = ns.iter().map(|(b, _)| *b).collect();
            if dom != dom2 {
                return false;
            }
            ms.iter().all(|(b, s1)| {
                let s2 = ns.iter().find(|(b2, _)| b2 == b).map(|(_, s)| s).unwrap();
                alpha_eq(s1, s2)
            })
        }
        _ => false,
    }
}

/// A canonical alpha-representative. The binder at lambda depth `d` becomes
/// the up atom `base + d`, where `base` lies above every free up index of
/// the whole term, and moderations are sorted by domain atom. Both inputs of
/// an alpha-equal pair map to the same tree: `alpha_eq(r, s)` iff
/// `canonicalize(r) == canonicalize(s)`.
pub fn canonicalize(r: &Term) -> Term {
    let base = free_atoms(r)
        .up_members()
        .iter()
        .map(|a| a.index() + 1)
        .max()
        .unwrap_or(0);
    canon(r, base, 0)
}

fn canon(r: &Term, base: u64, depth: u64) -> Term {
    match r {
        Term::Atom(_) | Term::Const(_) => r.clone(),
        Term::App(f, x) => Term::app(canon(f, base, depth), canon(x, base, depth)),
        Term::Lam { binder, ty, body } => {
            // the target is never free here: frees of the body are below
            // `base` or are ancestor binders strictly shallower than this one
            let target = Atom::up(base + depth);
            let body = if *binder == target {
                (**body).clone()
            } else {
                swap_up(target, *binder, body)
            };
            Term::lam(target, ty.clone(), canon(&body, base, depth + 1))
        }
        Term::Unk { name, mods } => {
            let mut mods: Vec<(Atom, Term)> = mods
                .iter()
                .map(|(b, s)| (*b, canon(s, base, depth)))
                .collect();
            mods.sort_by_key(|(b, _)| *b);
            Term::Unk {
                name: name.clone(),
                mods,
            }
        }
    }
}

/// Helper for building atoms in tests and examples: `up_atom(0)` is `a`.
pub fn up_atom(index: u64) -> Atom {
    Atom::new(Sort::Up, index)
}

pub fn down_atom(index: u64) -> Atom {
    Atom::new(Sort::Down, index)
}
