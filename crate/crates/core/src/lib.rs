//! Kernel for a simply typed lambda calculus over two-sorted atoms with
//! moderated unknowns ("holes"), together with a checkable model layer for
//! the substitution algebra.
//!
//! Modules:
//! - [`atoms`]: sorts, atoms, finite permutations, finite/cofinite atom sets.
//! - [`syntax`]: types, terms, the permutation action, free atoms and
//!   unknowns, alpha-equivalence.
//! - [`subst`]: capture-avoiding level-1 substitution and level-2
//!   instantiation of unknowns.
//! - [`typing`]: contexts and type inference, including the Meta rule for
//!   moderated unknowns.
//! - [`reduction`]: beta-steps, normalization, beta-equivalence.
//! - [`models`]: the abstract model interface, the syntactic term model,
//!   table-driven finite models, interpretation under valuations, and the
//!   substitution-axiom checker.

pub mod atoms;
pub mod models;
pub mod reduction;
pub mod subst;
pub mod syntax;
pub mod typing;

pub use atoms::{fresh_down, fresh_up, Atom, AtomSet, Permutation, Sort};
pub use syntax::{
    alpha_eq, canonicalize, free_atoms, free_unknowns, perm_act, SimpleType, Signature, Term,
    TermPath, UnknownName,
};
pub use subst::{subst_l1, subst_l2, SubstL1, SubstL2};
pub use typing::{check, infer, Context, TypeError, TypeErrorKind};
pub use reduction::{beta_eq, beta_step, normalize, ReductionError, ReductionTrace};
