//! Model realizations of the substitution algebra: the abstract interface,
//! interpretation of terms under valuations, simultaneous substitution on
//! elements, and the axiom checker.
//!
//! A model assigns to each context and type a carrier of elements, with
//! atoms interpreted as themselves, a non-functional abstraction operation,
//! application, a substitution action, and a permutation action. The
//! substitution action must satisfy Suba, Sub#, SubApp and SubLam; SubId is
//! checked too but reported as optional. `check_axioms` evaluates the axioms
//! either exhaustively over a finite model's declared tables or on sampled
//! cells of the syntactic term model, and reports coverage plus a
//! counterexample witness for anything that fails.

mod finite;
pub mod sampling;
mod term_model;

pub use finite::{load_finite_model, parse_finite_model, FiniteModel, FiniteModelError, Label};
pub use term_model::{TermModel, TermModelElement};

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::atoms::{Atom, AtomSet, Permutation, Sort};
use crate::reduction::ReductionError;
use crate::syntax::{free_unknowns, Signature, SimpleType, Term, UnknownName};
use crate::typing::{infer, Context, TypeError};

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("undefined in this model: {0}")]
    Undefined(String),
    #[error("{0}")]
    Type(#[from] TypeError),
    #[error("{0}")]
    Reduction(ReductionError),
    #[error("element is not in the carrier for type {ty}")]
    NotInCarrier { ty: SimpleType },
    #[error("abstraction needs an up-sorted binder, got {0}")]
    DownBinder(Atom),
    #[error("expected an element of type {expected}, got {found}")]
    ElementType {
        expected: SimpleType,
        found: SimpleType,
    },
    #[error("elements live in incompatible contexts")]
    IncompatibleContexts,
    #[error("atom {0} is not typed in the element's context")]
    UntypedAtom(Atom),
    #[error("valuation does not cover unknown {0}")]
    MissingValuation(UnknownName),
    #[error("valuation element for {unknown} has up atom {atom} in its support")]
    ValuationSupport { unknown: UnknownName, atom: Atom },
    #[error("term-model elements must be hole-free")]
    HoleInElement,
    #[error("duplicate substitution target {0}")]
    DuplicateTarget(Atom),
    #[error("no fresh atom of the required sort is available")]
    NoFreshAtom,
}

impl From<ReductionError> for ModelError {
    fn from(e: ReductionError) -> Self {
        match e {
            ReductionError::Type(t) => ModelError::Type(t),
            other => ModelError::Reduction(other),
        }
    }
}

/// The operations any model realization provides. Partial realizations
/// report unreachable cells as `ModelError::Undefined`, which the axiom
/// checker counts as skipped coverage rather than failure.
pub trait Model {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn signature(&self) -> &Signature;

    /// Membership in the carrier assigned to `(ctx, ty)`.
    fn contains(&self, ctx: &Context, ty: &SimpleType, x: &Self::Elem) -> Result<bool, ModelError>;

    /// The element interpreting atom `a` at type `ty`; requires `a:ty ∈ ctx`.
    fn atom_elem(&self, ctx: &Context, a: Atom, ty: &SimpleType) -> Result<Self::Elem, ModelError>;

    /// The element interpreting a constant. The element itself is the same
    /// in every carrier; the context is bookkeeping for realizations that
    /// track where an element was built.
    fn const_elem(&self, ctx: &Context, name: &str) -> Result<Self::Elem, ModelError>;

    /// Name-abstraction `[a:ty]x`.
    fn abs_elem(&self, a: Atom, ty: &SimpleType, x: &Self::Elem) -> Result<Self::Elem, ModelError>;

    fn app_elem(&self, fun: &Self::Elem, arg: &Self::Elem) -> Result<Self::Elem, ModelError>;

    /// The substitution action `x[a ↦ y]`.
    fn subst_elem(&self, x: &Self::Elem, a: Atom, y: &Self::Elem) -> Result<Self::Elem, ModelError>;

    /// The permutation action on elements. Unlike the action on terms this
    /// is not restricted to up-sorted permutations.
    fn perm_elem(&self, pi: &Permutation, x: &Self::Elem) -> Result<Self::Elem, ModelError>;

    /// A supporting atom set for the element.
    fn supp(&self, x: &Self::Elem) -> Result<AtomSet, ModelError>;

    /// Atoms the fresh-name picker of [`sim_subst`] must avoid for this
    /// element. Must contain the support; the term model also avoids the
    /// element's whole context so a renamed atom never collides with a
    /// declared typing. Picking extra-fresh atoms never changes the result.
    fn fresh_avoid(&self, x: &Self::Elem) -> Result<AtomSet, ModelError> {
        self.supp(x)
    }
}

/// An assignment of model elements to unknowns. Every assigned element must
/// have down-sorted support; this is checked when the valuation is used.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct Valuation<E> {
    entries: BTreeMap<UnknownName, E>,
}

impl<E: Clone> Valuation<E> {
    pub fn new() -> Self {
        Valuation {
            entries: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, x: impl Into<UnknownName>, e: E) {
        self.entries.insert(x.into(), e);
    }

    pub fn with(mut self, x: impl Into<UnknownName>, e: E) -> Self {
        self.insert(x, e);
        self
    }

    pub fn get(&self, x: &UnknownName) -> Option<&E> {
        self.entries.get(x)
    }

    /// The valuation updated at one unknown, leaving `self` untouched.
    pub fn updated(&self, x: impl Into<UnknownName>, e: E) -> Self {
        let mut out = self.clone();
        out.insert(x, e);
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (&UnknownName, &E)> {
        self.entries.iter()
    }
}

/// `Γ ⊨ ς`: every assigned unknown typed in the context maps into the
/// matching carrier and has down-sorted support.
pub fn satisfies<M: Model>(
    m: &M,
    val: &Valuation<M::Elem>,
    ctx: &Context,
) -> Result<bool, ModelError> {
    for (x, e) in val.iter() {
        if !m.supp(e)?.is_subset(&AtomSet::all_down()) {
            return Ok(false);
        }
        if let Some(ty) = ctx.unknown_type(x) {
            if !m.contains(ctx, ty, e)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Choice points of [`sim_subst`], exposed so tests can confirm the result
/// does not depend on them.
#[derive(Clone, Copy, Debug, Default)]
pub struct SimSubstChoice {
    /// Skip this many candidate fresh atoms before picking each one.
    pub fresh_skip: usize,
    /// Carry out the sequential substitutions in reverse order.
    pub reverse_order: bool,
}

/// Simultaneous substitution `x[b_i ↦ y_i]`: rename the targets to fresh
/// atoms, then substitute for them one at a time.
pub fn sim_subst<M: Model>(
    m: &M,
    x: &M::Elem,
    pairs: &[(Atom, M::Elem)],
) -> Result<M::Elem, ModelError> {
    sim_subst_with(m, x, pairs, SimSubstChoice::default())
}

pub fn sim_subst_with<M: Model>(
    m: &M,
    x: &M::Elem,
    pairs: &[(Atom, M::Elem)],
    choice: SimSubstChoice,
) -> Result<M::Elem, ModelError> {
    if pairs.is_empty() {
        return Ok(x.clone());
    }
    for (i, (b, _)) in pairs.iter().enumerate() {
        if pairs[..i].iter().any(|(b2, _)| b2 == b) {
            return Err(ModelError::DuplicateTarget(*b));
        }
    }
    let mut avoid = m.fresh_avoid(x)?;
    for (b, y) in pairs {
        avoid = avoid.union(&m.fresh_avoid(y)?).insert(*b);
    }
    let mut fresh = Vec::with_capacity(pairs.len());
    for (b, _) in pairs {
        let c = pick_fresh(b.sort(), &avoid, choice.fresh_skip)?;
        avoid = avoid.insert(c);
        fresh.push(c);
    }
    // (c1 b1) ∘ ... ∘ (cn bn); the swaps have disjoint support
    let mut pi = Permutation::identity();
    for (&c, (b, _)) in fresh.iter().zip(pairs) {
        pi = pi.compose(&Permutation::swap(c, *b).expect("fresh atom differs"));
    }
    let mut cur = m.perm_elem(&pi, x)?;
    let order: Vec<usize> = if choice.reverse_order {
        (0..pairs.len()).rev().collect()
    } else {
        (0..pairs.len()).collect()
    };
    for i in order {
        cur = m.subst_elem(&cur, fresh[i], &pairs[i].1)?;
    }
    Ok(cur)
}

fn pick_fresh(sort: Sort, avoid: &AtomSet, skip: usize) -> Result<Atom, ModelError> {
    let mut remaining = skip;
    match (sort, avoid) {
        (Sort::Down, AtomSet::CofiniteDown { excluded_down, .. }) => {
            // the only available down atoms are the excluded ones
            for &a in excluded_down {
                if remaining == 0 {
                    return Ok(a);
                }
                remaining -= 1;
            }
            Err(ModelError::NoFreshAtom)
        }
        _ => {
            let mut index = 0;
            loop {
                let a = Atom::new(sort, index);
                if !avoid.contains(a) {
                    if remaining == 0 {
                        return Ok(a);
                    }
                    remaining -= 1;
                }
                index += 1;
            }
        }
    }
}

/// Interpret a typed term under a valuation. Preconditions checked up
/// front: the term is typed in `ctx`, and every free unknown is assigned an
/// element of its declared carrier with down-sorted support.
pub fn interp<M: Model>(
    m: &M,
    val: &Valuation<M::Elem>,
    ctx: &Context,
    r: &Term,
) -> Result<M::Elem, ModelError> {
    infer(m.signature(), ctx, r)?;
    for x in free_unknowns(r) {
        let e = val
            .get(&x)
            .ok_or_else(|| ModelError::MissingValuation(x.clone()))?;
        let supp = m.supp(e)?;
        if !supp.is_subset(&AtomSet::all_down()) {
            let atom = supp
                .up_members()
                .into_iter()
                .next()
                .expect("non-down support has an up member");
            return Err(ModelError::ValuationSupport { unknown: x, atom });
        }
        let ty = ctx
            .unknown_type(&x)
            .cloned()
            .expect("typed term has typed unknowns");
        if !m.contains(ctx, &ty, e)? {
            return Err(ModelError::NotInCarrier { ty });
        }
    }
    interp_rec(m, val, ctx, r)
}

fn interp_rec<M: Model>(
    m: &M,
    val: &Valuation<M::Elem>,
    ctx: &Context,
    r: &Term,
) -> Result<M::Elem, ModelError> {
    match r {
        Term::Atom(a) => {
            let ty = ctx
                .atom_type(*a)
                .cloned()
                .ok_or(ModelError::UntypedAtom(*a))?;
            m.atom_elem(ctx, *a, &ty)
        }
        Term::Const(c) => m.const_elem(ctx, c),
        Term::App(f, x) => {
            let fe = interp_rec(m, val, ctx, f)?;
            let xe = interp_rec(m, val, ctx, x)?;
            m.app_elem(&fe, &xe)
        }
        Term::Lam { binder, ty, body } => {
            let (binder, body) = if ctx.has_atom(*binder) {
                let avoid = ctx
                    .atom_domain()
                    .union(&crate::syntax::free_atoms(body))
                    .insert(*binder);
                let fresh = crate::atoms::fresh_up(&avoid);
                (fresh, crate::syntax::swap_up(fresh, *binder, body))
            } else {
                (*binder, (**body).clone())
            };
            let inner = ctx.clone().with_atom(binder, ty.clone());
            let x = interp_rec(m, val, &inner, &body)?;
            m.abs_elem(binder, ty, &x)
        }
        Term::Unk { name, mods } => {
            let x = val
                .get(name)
                .ok_or_else(|| ModelError::MissingValuation(name.clone()))?
                .clone();
            let mut pairs = Vec::with_capacity(mods.len());
            for (b, s) in mods {
                pairs.push((*b, interp_rec(m, val, ctx, s)?));
            }
            sim_subst(m, &x, &pairs)
        }
    }
}

/// Validity of the typed equality `Γ ⊢ r = s`: both sides typed at a common
/// type with equal interpretations.
pub fn validate<M: Model>(
    m: &M,
    val: &Valuation<M::Elem>,
    ctx: &Context,
    r: &Term,
    s: &Term,
) -> Result<bool, ModelError> {
    let left = infer(m.signature(), ctx, r)?;
    let right = infer(m.signature(), ctx, s)?;
    if left != right {
        return Err(ModelError::ElementType {
            expected: left,
            found: right,
        });
    }
    Ok(interp(m, val, ctx, r)? == interp(m, val, ctx, s)?)
}

/// The five checked substitution axioms.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Axiom {
    Suba,
    SubFresh,
    SubApp,
    SubLam,
    SubId,
}

impl Axiom {
    pub const ALL: [Axiom; 5] = [
        Axiom::Suba,
        Axiom::SubFresh,
        Axiom::SubApp,
        Axiom::SubLam,
        Axiom::SubId,
    ];

    /// SubId excludes some models on purpose; it is reported separately.
    pub fn is_optional(self) -> bool {
        matches!(self, Axiom::SubId)
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::Suba => "Suba",
            Axiom::SubFresh => "Sub#",
            Axiom::SubApp => "SubApp",
            Axiom::SubLam => "SubLam",
            Axiom::SubId => "SubId",
        })
    }
}

/// A counterexample to one axiom instance.
#[derive(Clone, PartialEq, Debug)]
pub struct Witness<E> {
    pub element: E,
    pub atom: Atom,
    pub argument: E,
    pub lhs: E,
    pub rhs: E,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Coverage {
    pub checked: usize,
    pub skipped: usize,
    pub failed: usize,
}

#[derive(Clone, PartialEq, Debug)]
pub struct AxiomOutcome<E> {
    pub axiom: Axiom,
    pub coverage: Coverage,
    pub witness: Option<Witness<E>>,
}

impl<E> AxiomOutcome<E> {
    pub fn holds(&self) -> bool {
        self.coverage.failed == 0
    }
}

/// Per-axiom status over the evaluated cells.
#[derive(Clone, PartialEq, Debug)]
pub struct AxiomReport<E> {
    pub outcomes: Vec<AxiomOutcome<E>>,
}

impl<E> AxiomReport<E> {
    pub fn outcome(&self, axiom: Axiom) -> &AxiomOutcome<E> {
        self.outcomes
            .iter()
            .find(|o| o.axiom == axiom)
            .expect("report covers all axioms")
    }

    /// True when every non-optional axiom holds on its evaluated cells.
    pub fn required_hold(&self) -> bool {
        self.outcomes
            .iter()
            .filter(|o| !o.axiom.is_optional())
            .all(|o| o.holds())
    }
}

/// `Suba`: `a[a↦x] = x`, instantiated at a typed atom.
#[derive(Clone, Debug)]
pub struct SubaCell<E> {
    pub ctx: Context,
    pub atom: Atom,
    pub ty: SimpleType,
    pub arg: E,
}

/// `Sub#`: `a # z` implies `z[a↦x] = z`.
#[derive(Clone, Debug)]
pub struct SubFreshCell<E> {
    pub z: E,
    pub atom: Atom,
    pub arg: E,
}

/// `SubApp`: `(z' z)[a↦x] = (z'[a↦x]) (z[a↦x])`.
#[derive(Clone, Debug)]
pub struct SubAppCell<E> {
    pub fun: E,
    pub arg_elem: E,
    pub atom: Atom,
    pub arg: E,
}

/// `SubLam`: `c # x` implies `([c:χ]z)[a↦x] = [c:χ](z[a↦x])`.
#[derive(Clone, Debug)]
pub struct SubLamCell<E> {
    pub binder: Atom,
    pub binder_ty: SimpleType,
    pub z: E,
    pub atom: Atom,
    pub arg: E,
}

/// `SubId`: `z[a↦a] = z`, instantiated at a typed atom.
#[derive(Clone, Debug)]
pub struct SubIdCell<E> {
    pub ctx: Context,
    pub z: E,
    pub atom: Atom,
    pub ty: SimpleType,
}

/// The cells `check_axioms` evaluates, one batch per axiom.
#[derive(Clone, Debug)]
pub struct AxiomCells<E> {
    pub suba: Vec<SubaCell<E>>,
    pub subfresh: Vec<SubFreshCell<E>>,
    pub subapp: Vec<SubAppCell<E>>,
    pub sublam: Vec<SubLamCell<E>>,
    pub subid: Vec<SubIdCell<E>>,
}

impl<E> Default for AxiomCells<E> {
    fn default() -> Self {
        AxiomCells {
            suba: Vec::new(),
            subfresh: Vec::new(),
            subapp: Vec::new(),
            sublam: Vec::new(),
            subid: Vec::new(),
        }
    }
}

/// How cells are produced: exhaustively for finite models, randomly for the
/// term model. The defaults match the desk-scale sampling plan.
#[derive(Clone, Copy, Debug)]
pub struct SamplingPlan {
    pub samples_per_axiom: usize,
    pub max_term_size: usize,
    pub max_atom_index: u64,
    pub seed: u64,
}

impl Default for SamplingPlan {
    fn default() -> Self {
        SamplingPlan {
            samples_per_axiom: 200,
            max_term_size: 20,
            max_atom_index: 8,
            seed: 0,
        }
    }
}

/// Models that can enumerate or sample their own axiom cells.
pub trait AxiomSampling: Model {
    fn axiom_cells(&self, plan: &SamplingPlan) -> Result<AxiomCells<Self::Elem>, ModelError>;
}

fn defined<T>(r: Result<T, ModelError>) -> Result<Option<T>, ModelError> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(ModelError::Undefined(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Evaluate the substitution axioms on the model's cells. Cells a partial
/// model leaves undefined, and cells whose freshness side condition does not
/// hold, count as skipped; failures carry the first counterexample found.
pub fn check_axioms<M: AxiomSampling>(
    m: &M,
    plan: &SamplingPlan,
) -> Result<AxiomReport<M::Elem>, ModelError> {
    let cells = m.axiom_cells(plan)?;
    let mut outcomes = Vec::new();

    let mut suba = AxiomOutcome {
        axiom: Axiom::Suba,
        coverage: Coverage::default(),
        witness: None,
    };
    for cell in &cells.suba {
        let step = (|| -> Result<Option<(M::Elem, M::Elem)>, ModelError> {
            let Some(ae) = defined(m.atom_elem(&cell.ctx, cell.atom, &cell.ty))? else {
                return Ok(None);
            };
            let Some(lhs) = defined(m.subst_elem(&ae, cell.atom, &cell.arg))? else {
                return Ok(None);
            };
            Ok(Some((ae, lhs)))
        })()?;
        match step {
            None => suba.coverage.skipped += 1,
            Some((ae, lhs)) => {
                suba.coverage.checked += 1;
                if lhs != cell.arg {
                    suba.coverage.failed += 1;
                    suba.witness.get_or_insert(Witness {
                        element: ae,
                        atom: cell.atom,
                        argument: cell.arg.clone(),
                        lhs,
                        rhs: cell.arg.clone(),
                    });
                }
            }
        }
    }
    outcomes.push(suba);

    let mut subfresh = AxiomOutcome {
        axiom: Axiom::SubFresh,
        coverage: Coverage::default(),
        witness: None,
    };
    for cell in &cells.subfresh {
        if m.supp(&cell.z)?.contains(cell.atom) {
            subfresh.coverage.skipped += 1;
            continue;
        }
        match defined(m.subst_elem(&cell.z, cell.atom, &cell.arg))? {
            None => subfresh.coverage.skipped += 1,
            Some(lhs) => {
                subfresh.coverage.checked += 1;
                if lhs != cell.z {
                    subfresh.coverage.failed += 1;
                    subfresh.witness.get_or_insert(Witness {
                        element: cell.z.clone(),
                        atom: cell.atom,
                        argument: cell.arg.clone(),
                        lhs,
                        rhs: cell.z.clone(),
                    });
                }
            }
        }
    }
    outcomes.push(subfresh);

    let mut subapp = AxiomOutcome {
        axiom: Axiom::SubApp,
        coverage: Coverage::default(),
        witness: None,
    };
    for cell in &cells.subapp {
        let step = (|| -> Result<Option<(M::Elem, M::Elem, M::Elem)>, ModelError> {
            let Some(app) = defined(m.app_elem(&cell.fun, &cell.arg_elem))? else {
                return Ok(None);
            };
            let Some(lhs) = defined(m.subst_elem(&app, cell.atom, &cell.arg))? else {
                return Ok(None);
            };
            let Some(fun_s) = defined(m.subst_elem(&cell.fun, cell.atom, &cell.arg))? else {
                return Ok(None);
            };
            let Some(arg_s) = defined(m.subst_elem(&cell.arg_elem, cell.atom, &cell.arg))? else {
                return Ok(None);
            };
            let Some(rhs) = defined(m.app_elem(&fun_s, &arg_s))? else {
                return Ok(None);
            };
            Ok(Some((app, lhs, rhs)))
        })()?;
        match step {
            None => subapp.coverage.skipped += 1,
            Some((app, lhs, rhs)) => {
                subapp.coverage.checked += 1;
                if lhs != rhs {
                    subapp.coverage.failed += 1;
                    subapp.witness.get_or_insert(Witness {
                        element: app,
                        atom: cell.atom,
                        argument: cell.arg.clone(),
                        lhs,
                        rhs,
                    });
                }
            }
        }
    }
    outcomes.push(subapp);

    let mut sublam = AxiomOutcome {
        axiom: Axiom::SubLam,
        coverage: Coverage::default(),
        witness: None,
    };
    for cell in &cells.sublam {
        if cell.binder == cell.atom || m.supp(&cell.arg)?.contains(cell.binder) {
            sublam.coverage.skipped += 1;
            continue;
        }
        let step = (|| -> Result<Option<(M::Elem, M::Elem, M::Elem)>, ModelError> {
            let Some(abs) = defined(m.abs_elem(cell.binder, &cell.binder_ty, &cell.z))? else {
                return Ok(None);
            };
            let Some(lhs) = defined(m.subst_elem(&abs, cell.atom, &cell.arg))? else {
                return Ok(None);
            };
            let Some(z_s) = defined(m.subst_elem(&cell.z, cell.atom, &cell.arg))? else {
                return Ok(None);
            };
            let Some(rhs) = defined(m.abs_elem(cell.binder, &cell.binder_ty, &z_s))? else {
                return Ok(None);
            };
            Ok(Some((abs, lhs, rhs)))
        })()?;
        match step {
            None => sublam.coverage.skipped += 1,
            Some((abs, lhs, rhs)) => {
                sublam.coverage.checked += 1;
                if lhs != rhs {
                    sublam.coverage.failed += 1;
                    sublam.witness.get_or_insert(Witness {
                        element: abs,
                        atom: cell.atom,
                        argument: cell.arg.clone(),
                        lhs,
                        rhs,
                    });
                }
            }
        }
    }
    outcomes.push(sublam);

    let mut subid = AxiomOutcome {
        axiom: Axiom::SubId,
        coverage: Coverage::default(),
        witness: None,
    };
    for cell in &cells.subid {
        let step = (|| -> Result<Option<(M::Elem, M::Elem)>, ModelError> {
            let Some(ae) = defined(m.atom_elem(&cell.ctx, cell.atom, &cell.ty))? else {
                return Ok(None);
            };
            let Some(lhs) = defined(m.subst_elem(&cell.z, cell.atom, &ae))? else {
                return Ok(None);
            };
            Ok(Some((ae, lhs)))
        })()?;
        match step {
            None => subid.coverage.skipped += 1,
            Some((ae, lhs)) => {
                subid.coverage.checked += 1;
                if lhs != cell.z {
                    subid.coverage.failed += 1;
                    subid.witness.get_or_insert(Witness {
                        element: cell.z.clone(),
                        atom: cell.atom,
                        argument: ae,
                        lhs,
                        rhs: cell.z.clone(),
                    });
                }
            }
        }
    }
    outcomes.push(subid);

    Ok(AxiomReport { outcomes })
}
