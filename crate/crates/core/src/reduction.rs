//! Beta-reduction, normalization, and decidable beta-equivalence.
//!
//! The strategy is leftmost-outermost, with reduction inside moderation
//! ranges enabled: a moderated unknown blocks no surrounding redex, and its
//! stored ranges must be normalized for normal forms to be canonical.
//! Beta-equivalence is decided by comparing normal forms up to alpha;
//! unknowns behave as typed constants applied to their moderation, so typed
//! terms normalize.

use thiserror::Error;

use crate::subst::{subst_l1, SubstL1};
use crate::syntax::{alpha_eq, PathStep, SimpleType, Signature, Term, TermPath};
use crate::typing::{infer, Context, TypeError};

/// Guards `normalize` against untyped input sneaking past the type check;
/// never reached by typed desk-scale terms.
pub const DEFAULT_STEP_BUDGET: usize = 100_000;

#[derive(Debug, Error, PartialEq)]
pub enum ReductionError {
    #[error("cannot normalize an ill-typed term: {0}")]
    Type(#[from] TypeError),
    #[error("terms have different types: {left} vs {right}")]
    TypeMismatch { left: SimpleType, right: SimpleType },
    #[error("no normal form within {budget} steps")]
    BudgetExceeded { budget: usize },
}

/// One contraction: where it happened and the whole term afterwards.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TraceStep {
    pub path: TermPath,
    pub term: Term,
}

/// The reduction sequence taken by `normalize_traced`; consecutive snapshots
/// differ by exactly one contraction.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ReductionTrace {
    pub steps: Vec<TraceStep>,
}

/// Contract the leftmost-outermost redex, or `None` if the term is normal.
pub fn beta_step(r: &Term) -> Option<Term> {
    beta_step_traced(r).map(|(_, t)| t)
}

/// As `beta_step`, also reporting the redex position.
pub fn beta_step_traced(r: &Term) -> Option<(TermPath, Term)> {
    step_at(r, &TermPath::root())
}

fn step_at(r: &Term, path: &TermPath) -> Option<(TermPath, Term)> {
    if let Term::App(f, x) = r {
        if let Term::Lam { binder, body, .. } = &**f {
            let contracted = subst_l1(body, &SubstL1::single(*binder, (**x).clone()));
            return Some((path.clone(), contracted));
        }
    }
    match r {
        Term::Atom(_) | Term::Const(_) => None,
        Term::Lam { binder, ty, body } => {
            let (at, body) = step_at(body, &path.child(PathStep::LamBody))?;
            Some((at, Term::lam(*binder, ty.clone(), body)))
        }
        Term::App(f, x) => {
            if let Some((at, f2)) = step_at(f, &path.child(PathStep::AppFun)) {
                return Some((at, Term::app(f2, (**x).clone())));
            }
            let (at, x2) = step_at(x, &path.child(PathStep::AppArg))?;
            Some((at, Term::app((**f).clone(), x2)))
        }
        Term::Unk { name, mods } => {
            for (i, (b, s)) in mods.iter().enumerate() {
                if let Some((at, s2)) = step_at(s, &path.child(PathStep::ModRange(*b))) {
                    let mut mods = mods.clone();
                    mods[i] = (*b, s2);
                    return Some((
                        at,
                        Term::Unk {
                            name: name.clone(),
                            mods,
                        },
                    ));
                }
            }
            None
        }
    }
}

pub fn is_normal(r: &Term) -> bool {
    beta_step_traced(r).is_none()
}

/// Reduce a typed term to its beta-normal form with the default budget.
pub fn normalize(sig: &Signature, ctx: &Context, r: &Term) -> Result<Term, ReductionError> {
    normalize_with_budget(sig, ctx, r, DEFAULT_STEP_BUDGET)
}

pub fn normalize_with_budget(
    sig: &Signature,
    ctx: &Context,
    r: &Term,
    budget: usize,
) -> Result<Term, ReductionError> {
    infer(sig, ctx, r)?;
    let mut cur = r.clone();
    for _ in 0..budget {
        match beta_step(&cur) {
            Some(next) => cur = next,
            None => return Ok(cur),
        }
    }
    Err(ReductionError::BudgetExceeded { budget })
}

/// As `normalize`, recording every contraction.
pub fn normalize_traced(
    sig: &Signature,
    ctx: &Context,
    r: &Term,
    budget: usize,
) -> Result<(Term, ReductionTrace), ReductionError> {
    infer(sig, ctx, r)?;
    let mut cur = r.clone();
    let mut trace = ReductionTrace::default();
    for _ in 0..budget {
        match beta_step_traced(&cur) {
            Some((path, next)) => {
                cur = next;
                trace.steps.push(TraceStep {
                    path,
                    term: cur.clone(),
                });
            }
            None => return Ok((cur, trace)),
        }
    }
    Err(ReductionError::BudgetExceeded { budget })
}

/// Decides beta-equivalence of two terms typed at a common type, by
/// normal-form comparison up to alpha.
pub fn beta_eq(sig: &Signature, ctx: &Context, r: &Term, s: &Term) -> Result<bool, ReductionError> {
    let left = infer(sig, ctx, r)?;
    let right = infer(sig, ctx, s)?;
    if left != right {
        return Err(ReductionError::TypeMismatch { left, right });
    }
    let rn = normalize(sig, ctx, r)?;
    let sn = normalize(sig, ctx, s)?;
    Ok(alpha_eq(&rn, &sn))
}
