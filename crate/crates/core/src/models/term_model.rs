//! The syntactic term model: elements are beta-classes of typed hole-free
//! terms, represented by a canonical normal form. Abstraction and
//! application act on representatives, the substitution action is level-1
//! substitution followed by normalization, and support is the free atoms of
//! the normal form.

use crate::atoms::{fresh_up, Atom, AtomSet, Permutation};
use crate::models::sampling::{self, GenCfg};
use crate::models::{
    AxiomCells, AxiomSampling, Model, ModelError, SamplingPlan, SubAppCell, SubFreshCell,
    SubIdCell, SubLamCell, SubaCell,
};
use crate::reduction::normalize;
use crate::syntax::{
    alpha_eq, canonicalize, free_atoms, Signature, SimpleType, Term,
};
use crate::typing::{infer, Context};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A beta-class of typed terms. Two elements are equal iff their normal
/// forms are alpha-equivalent; the stored context and type are the carrier
/// the element was built in.
#[derive(Clone, Eq, Debug)]
pub struct TermModelElement {
    ctx: Context,
    ty: SimpleType,
    nf: Term,
}

impl PartialEq for TermModelElement {
    fn eq(&self, other: &Self) -> bool {
        alpha_eq(&self.nf, &other.nf)
    }
}

impl TermModelElement {
    pub fn normal_form(&self) -> &Term {
        &self.nf
    }

    pub fn element_type(&self) -> &SimpleType {
        &self.ty
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }
}

/// The model of beta-classes over a fixed signature.
#[derive(Clone, Debug)]
pub struct TermModel {
    sig: Signature,
}

impl TermModel {
    pub fn new(sig: Signature) -> Self {
        TermModel { sig }
    }

    /// The beta-class of a typed hole-free term.
    pub fn element(&self, ctx: &Context, t: &Term) -> Result<TermModelElement, ModelError> {
        if !t.is_hole_free() {
            return Err(ModelError::HoleInElement);
        }
        let ty = infer(&self.sig, ctx, t)?;
        let nf = normalize(&self.sig, ctx, t)?;
        Ok(TermModelElement {
            ctx: ctx.clone(),
            ty,
            nf: canonicalize(&nf),
        })
    }

    fn merged_ctx(&self, x: &TermModelElement, y: &TermModelElement) -> Result<Context, ModelError> {
        x.ctx.merged(&y.ctx).ok_or(ModelError::IncompatibleContexts)
    }
}

/// Apply a permutation to a hole-free representative. Binders are first
/// alpha-renamed away from `nontriv(pi)`, after which the action renames
/// free occurrences pointwise; this realizes the class action for arbitrary
/// permutations even though binders themselves stay up-sorted.
fn perm_class(pi: &Permutation, t: &Term) -> Term {
    match t {
        Term::Atom(a) => Term::atom(pi.apply(*a)),
        Term::Const(_) => t.clone(),
        Term::App(f, x) => Term::app(perm_class(pi, f), perm_class(pi, x)),
        Term::Lam { binder, ty, body } => {
            if pi.nontriv().contains(binder) {
                let mut avoid = free_atoms(body).insert(*binder);
                for a in pi.nontriv() {
                    avoid = avoid.insert(a);
                }
                let fresh = fresh_up(&avoid);
                let body = crate::syntax::swap_up(fresh, *binder, body);
                Term::lam(fresh, ty.clone(), perm_class(pi, &body))
            } else {
                Term::lam(*binder, ty.clone(), perm_class(pi, body))
            }
        }
        Term::Unk { .. } => unreachable!("term-model elements are hole-free"),
    }
}

impl Model for TermModel {
    type Elem = TermModelElement;

    fn signature(&self) -> &Signature {
        &self.sig
    }

    fn contains(&self, ctx: &Context, ty: &SimpleType, x: &Self::Elem) -> Result<bool, ModelError> {
        Ok(infer(&self.sig, ctx, &x.nf).as_ref() == Ok(ty))
    }

    fn atom_elem(&self, ctx: &Context, a: Atom, ty: &SimpleType) -> Result<Self::Elem, ModelError> {
        match ctx.atom_type(a) {
            Some(declared) if declared == ty => Ok(TermModelElement {
                ctx: ctx.clone(),
                ty: ty.clone(),
                nf: Term::atom(a),
            }),
            Some(declared) => Err(ModelError::ElementType {
                expected: ty.clone(),
                found: declared.clone(),
            }),
            None => Err(ModelError::UntypedAtom(a)),
        }
    }

    fn const_elem(&self, ctx: &Context, name: &str) -> Result<Self::Elem, ModelError> {
        let ty = self
            .sig
            .constant_type(name)
            .cloned()
            .ok_or_else(|| ModelError::Undefined(format!("constant {name}")))?;
        Ok(TermModelElement {
            ctx: ctx.clone(),
            ty,
            nf: Term::constant(name),
        })
    }

    fn abs_elem(&self, a: Atom, ty: &SimpleType, x: &Self::Elem) -> Result<Self::Elem, ModelError> {
        if !a.is_up() {
            return Err(ModelError::DownBinder(a));
        }
        let mut ctx = x.ctx.clone();
        ctx.remove_atom(a);
        // a normal body under a lambda is still normal
        Ok(TermModelElement {
            ctx,
            ty: SimpleType::arrow(ty.clone(), x.ty.clone()),
            nf: canonicalize(&Term::lam(a, ty.clone(), x.nf.clone())),
        })
    }

    fn app_elem(&self, fun: &Self::Elem, arg: &Self::Elem) -> Result<Self::Elem, ModelError> {
        let (dom, cod) = fun.ty.as_arrow().ok_or_else(|| ModelError::ElementType {
            expected: SimpleType::arrow(arg.ty.clone(), arg.ty.clone()),
            found: fun.ty.clone(),
        })?;
        if dom != &arg.ty {
            return Err(ModelError::ElementType {
                expected: dom.clone(),
                found: arg.ty.clone(),
            });
        }
        let ctx = self.merged_ctx(fun, arg)?;
        let nf = normalize(&self.sig, &ctx, &Term::app(fun.nf.clone(), arg.nf.clone()))?;
        Ok(TermModelElement {
            ctx,
            ty: cod.clone(),
            nf: canonicalize(&nf),
        })
    }

    fn subst_elem(&self, x: &Self::Elem, a: Atom, y: &Self::Elem) -> Result<Self::Elem, ModelError> {
        let ctx = self.merged_ctx(x, y)?;
        match ctx.atom_type(a) {
            Some(ty) if *ty == y.ty => {}
            Some(ty) => {
                return Err(ModelError::ElementType {
                    expected: ty.clone(),
                    found: y.ty.clone(),
                })
            }
            None => return Err(ModelError::UntypedAtom(a)),
        }
        let substituted = crate::subst::subst_l1(
            &x.nf,
            &crate::subst::SubstL1::single(a, y.nf.clone()),
        );
        let nf = canonicalize(&normalize(&self.sig, &ctx, &substituted)?);
        // a substituted-away atom leaves the bookkeeping context, so the
        // fresh scaffolding of sim_subst never outlives the call
        let mut ctx = ctx;
        if !free_atoms(&nf).contains(a) {
            ctx.remove_atom(a);
        }
        Ok(TermModelElement {
            ctx,
            ty: x.ty.clone(),
            nf,
        })
    }

    fn perm_elem(&self, pi: &Permutation, x: &Self::Elem) -> Result<Self::Elem, ModelError> {
        let mut ctx = Context::new();
        for (a, ty) in x.ctx.atoms() {
            ctx.insert_atom(pi.apply(a), ty.clone());
        }
        for (u, ty) in x.ctx.unknowns() {
            ctx.insert_unknown(u.clone(), ty.clone());
        }
        Ok(TermModelElement {
            ctx,
            ty: x.ty.clone(),
            nf: canonicalize(&perm_class(pi, &x.nf)),
        })
    }

    fn supp(&self, x: &Self::Elem) -> Result<AtomSet, ModelError> {
        Ok(free_atoms(&x.nf))
    }

    fn fresh_avoid(&self, x: &Self::Elem) -> Result<AtomSet, ModelError> {
        Ok(free_atoms(&x.nf).union(&x.ctx.atom_domain()))
    }
}

impl AxiomSampling for TermModel {
    /// Randomly sampled cells: fresh contexts and typed normal forms drawn
    /// with the plan's seed, sizes, and atom indices.
    fn axiom_cells(&self, plan: &SamplingPlan) -> Result<AxiomCells<Self::Elem>, ModelError> {
        let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
        let cfg = GenCfg {
            max_size: plan.max_term_size,
            max_atom_index: plan.max_atom_index,
            allow_unknowns: false,
            down_free_atoms_only: false,
        };
        let mut cells = AxiomCells::default();

        for _ in 0..plan.samples_per_axiom {
            let ctx = sampling::random_context(&mut rng, &self.sig, &cfg);
            let (atom, ty) = sampling::random_context_atom(&mut rng, &ctx);
            let arg = self.random_element(&mut rng, &ctx, &ty, &cfg)?;
            cells.suba.push(SubaCell {
                ctx,
                atom,
                ty,
                arg,
            });
        }

        let mut found = 0;
        let mut attempts = 0;
        while found < plan.samples_per_axiom && attempts < plan.samples_per_axiom * 50 {
            attempts += 1;
            let ctx = sampling::random_context(&mut rng, &self.sig, &cfg);
            let zty = sampling::random_type(&mut rng, &self.sig, 2);
            let z = self.random_element(&mut rng, &ctx, &zty, &cfg)?;
            let free = free_atoms(&z.nf);
            let candidates: Vec<(Atom, SimpleType)> = ctx
                .atoms()
                .filter(|(a, _)| !free.contains(*a))
                .map(|(a, ty)| (a, ty.clone()))
                .collect();
            let Some((atom, aty)) = sampling::pick(&mut rng, &candidates) else {
                continue;
            };
            let arg = self.random_element(&mut rng, &ctx, aty, &cfg)?;
            cells.subfresh.push(SubFreshCell {
                z,
                atom: *atom,
                arg,
            });
            found += 1;
        }

        for _ in 0..plan.samples_per_axiom {
            let ctx = sampling::random_context(&mut rng, &self.sig, &cfg);
            let dom = sampling::random_type(&mut rng, &self.sig, 1);
            let cod = sampling::random_type(&mut rng, &self.sig, 1);
            let fun = self.random_element(
                &mut rng,
                &ctx,
                &SimpleType::arrow(dom.clone(), cod),
                &cfg,
            )?;
            let arg_elem = self.random_element(&mut rng, &ctx, &dom, &cfg)?;
            let (atom, aty) = sampling::random_context_atom(&mut rng, &ctx);
            let arg = self.random_element(&mut rng, &ctx, &aty, &cfg)?;
            cells.subapp.push(SubAppCell {
                fun,
                arg_elem,
                atom,
                arg,
            });
        }

        for _ in 0..plan.samples_per_axiom {
            let ctx = sampling::random_context(&mut rng, &self.sig, &cfg);
            let binder = fresh_up(&ctx.atom_domain());
            let binder_ty = sampling::random_type(&mut rng, &self.sig, 1);
            let inner = ctx.clone().with_atom(binder, binder_ty.clone());
            let zty = sampling::random_type(&mut rng, &self.sig, 1);
            let z = self.random_element(&mut rng, &inner, &zty, &cfg)?;
            // the substitution target comes from the outer context, so it
            // differs from the binder; the argument avoids the binder too
            let (atom, aty) = sampling::random_context_atom(&mut rng, &ctx);
            let arg = self.random_element(&mut rng, &ctx, &aty, &cfg)?;
            cells.sublam.push(SubLamCell {
                binder,
                binder_ty,
                z,
                atom,
                arg,
            });
        }

        for _ in 0..plan.samples_per_axiom {
            let ctx = sampling::random_context(&mut rng, &self.sig, &cfg);
            let zty = sampling::random_type(&mut rng, &self.sig, 2);
            let z = self.random_element(&mut rng, &ctx, &zty, &cfg)?;
            let (atom, ty) = sampling::random_context_atom(&mut rng, &ctx);
            cells.subid.push(SubIdCell { ctx, z, atom, ty });
        }

        Ok(cells)
    }
}

impl TermModel {
    fn random_element(
        &self,
        rng: &mut ChaCha8Rng,
        ctx: &Context,
        ty: &SimpleType,
        cfg: &GenCfg,
    ) -> Result<TermModelElement, ModelError> {
        let size = rng.random_range(1..=cfg.max_size.max(1));
        let term = sampling::random_term_of_type(rng, &self.sig, ctx, ty, size, cfg);
        self.element(ctx, &term)
    }
}
