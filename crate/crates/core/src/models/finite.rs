//! Table-driven finite models, loaded from a plain-text file.
//!
//! The format is line-oriented; `--` starts a comment. Rows:
//!
//! ```text
//! base t u                          -- declare base types
//! carrier [ a : t ] t = ea 0 1      -- carrier for a context and type
//! atom a : t = ea                   -- interpretation of a typed atom
//! const C : t = 0                   -- interpretation of a constant
//! abs [ c : t ] z = w              -- abstraction table
//! app f x = y                       -- application table
//! subst z [ a := x ] = w            -- substitution table
//! perm ( a b ) z = w                -- swapping action
//! supp z = { a 'b }                 -- declared support, one row per element
//! ```
//!
//! Element labels are bare identifiers (digits allowed, so `0` and `1` are
//! labels); atoms use the same spelling as the term syntax, down atoms with
//! a leading apostrophe. Tables may be partial: undeclared cells surface as
//! `ModelError::Undefined` and the axiom checker reports them as skipped
//! coverage. Every element must carry a `supp` declaration, swap rows must
//! be bijective and consistent with declared supports, and declared
//! carriers must respect intersections.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use thiserror::Error;

use crate::atoms::{Atom, AtomSet, Permutation};
use crate::models::{
    AxiomCells, AxiomSampling, Model, ModelError, SamplingPlan, SubAppCell, SubFreshCell,
    SubIdCell, SubLamCell, SubaCell,
};
use crate::syntax::{Signature, SignatureError, SimpleType};
use crate::typing::Context;

/// An element of a finite model, named by its label in the model file.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Label(pub String);

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

type CtxKey = BTreeMap<Atom, SimpleType>;

#[derive(Clone, Debug)]
pub struct FiniteModel {
    sig: Signature,
    elements: BTreeSet<Label>,
    carriers: BTreeMap<(CtxKey, SimpleType), BTreeSet<Label>>,
    atom_table: BTreeMap<(Atom, SimpleType), Label>,
    const_table: BTreeMap<String, Label>,
    abs_table: BTreeMap<(Atom, SimpleType, Label), Label>,
    app_table: BTreeMap<(Label, Label), Label>,
    subst_table: BTreeMap<(Label, Atom, Label), Label>,
    perm_table: BTreeMap<(Atom, Atom, Label), Label>,
    supp_table: BTreeMap<Label, BTreeSet<Atom>>,
}

#[derive(Debug, Error, PartialEq)]
pub enum FiniteModelError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Signature(#[from] SignatureError),
    #[error("row references undeclared element {0}")]
    DanglingLabel(Label),
    #[error("element {0} has no supp declaration")]
    MissingSupp(Label),
    #[error("swap ({a} {b}) is not a bijection on declared elements")]
    NonBijectivePerm { a: Atom, b: Atom },
    #[error("swap ({a} {b}) moves {label} although both atoms are outside its declared support")]
    PermMovesSupported { a: Atom, b: Atom, label: Label },
    #[error("element {label} has support atom {atom} outside the context of a carrier containing it")]
    SupportOutsideContext { label: Label, atom: Atom },
    #[error("declared carriers do not respect context intersection at type {0}")]
    CarrierIntersection(SimpleType),
    #[error("could not read model file: {0}")]
    Io(String),
}

impl FiniteModel {
    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn elements(&self) -> impl Iterator<Item = &Label> {
        self.elements.iter()
    }

    pub fn carriers(&self) -> impl Iterator<Item = (&CtxKey, &SimpleType, &BTreeSet<Label>)> {
        self.carriers.iter().map(|((k, ty), els)| (k, ty, els))
    }

    pub fn declared_supp(&self, label: &Label) -> Option<&BTreeSet<Atom>> {
        self.supp_table.get(label)
    }

    /// Human-readable notes about which tables are empty, so a fragment like
    /// a base-type-only model is visibly partial.
    pub fn partial_notes(&self) -> Vec<String> {
        let mut notes = Vec::new();
        if self.abs_table.is_empty() {
            notes.push("no abs rows: abstraction is undefined".to_string());
        }
        if self.app_table.is_empty() {
            notes.push("no app rows: application is undefined".to_string());
        }
        if self.subst_table.is_empty() {
            notes.push("no subst rows: substitution is undefined".to_string());
        }
        if self.perm_table.is_empty() {
            notes.push("no perm rows: swaps act only through declared supports".to_string());
        }
        notes
    }

    fn known(&self, label: &Label) -> Result<(), ModelError> {
        if self.elements.contains(label) {
            Ok(())
        } else {
            Err(ModelError::Undefined(format!("element {label}")))
        }
    }
}

impl Model for FiniteModel {
    type Elem = Label;

    fn signature(&self) -> &Signature {
        &self.sig
    }

    fn contains(&self, ctx: &Context, ty: &SimpleType, x: &Label) -> Result<bool, ModelError> {
        // carriers depend only on the atom typings of the context
        let key: CtxKey = ctx.atoms().map(|(a, t)| (a, t.clone())).collect();
        match self.carriers.get(&(key, ty.clone())) {
            Some(els) => Ok(els.contains(x)),
            None => Err(ModelError::Undefined(format!("carrier at type {ty}"))),
        }
    }

    fn atom_elem(&self, _ctx: &Context, a: Atom, ty: &SimpleType) -> Result<Label, ModelError> {
        self.atom_table
            .get(&(a, ty.clone()))
            .cloned()
            .ok_or_else(|| ModelError::Undefined(format!("atom cell ({a}, {ty})")))
    }

    fn const_elem(&self, _ctx: &Context, name: &str) -> Result<Label, ModelError> {
        self.const_table
            .get(name)
            .cloned()
            .ok_or_else(|| ModelError::Undefined(format!("constant {name}")))
    }

    fn abs_elem(&self, a: Atom, ty: &SimpleType, x: &Label) -> Result<Label, ModelError> {
        self.known(x)?;
        self.abs_table
            .get(&(a, ty.clone(), x.clone()))
            .cloned()
            .ok_or_else(|| ModelError::Undefined(format!("abs cell ([{a}:{ty}] {x})")))
    }

    fn app_elem(&self, fun: &Label, arg: &Label) -> Result<Label, ModelError> {
        self.known(fun)?;
        self.known(arg)?;
        self.app_table
            .get(&(fun.clone(), arg.clone()))
            .cloned()
            .ok_or_else(|| ModelError::Undefined(format!("app cell ({fun} {arg})")))
    }

    fn subst_elem(&self, x: &Label, a: Atom, y: &Label) -> Result<Label, ModelError> {
        self.known(x)?;
        self.known(y)?;
        self.subst_table
            .get(&(x.clone(), a, y.clone()))
            .cloned()
            .ok_or_else(|| ModelError::Undefined(format!("subst cell ({x}[{a} := {y}])")))
    }

    fn perm_elem(&self, pi: &Permutation, x: &Label) -> Result<Label, ModelError> {
        let mut cur = x.clone();
        for (a, b) in pi.as_swaps().into_iter().rev() {
            let supp = self
                .supp_table
                .get(&cur)
                .ok_or_else(|| ModelError::Undefined(format!("supp of {cur}")))?;
            if !supp.contains(&a) && !supp.contains(&b) {
                continue; // the swap fixes everything in the support
            }
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            cur = self
                .perm_table
                .get(&(lo, hi, cur.clone()))
                .cloned()
                .ok_or_else(|| ModelError::Undefined(format!("perm cell (({a} {b}) {cur})")))?;
        }
        Ok(cur)
    }

    fn supp(&self, x: &Label) -> Result<AtomSet, ModelError> {
        self.supp_table
            .get(x)
            .map(|atoms| AtomSet::finite(atoms.iter().copied()))
            .ok_or_else(|| ModelError::Undefined(format!("supp of {x}")))
    }
}

impl AxiomSampling for FiniteModel {
    /// Exhaustive cells over the declared tables.
    fn axiom_cells(&self, _plan: &SamplingPlan) -> Result<AxiomCells<Label>, ModelError> {
        let mut cells = AxiomCells::default();

        // every (atom, arg) pair mentioned by the substitution table
        let pairs: BTreeSet<(Atom, Label)> = self
            .subst_table
            .keys()
            .map(|(_, a, y)| (*a, y.clone()))
            .collect();

        for ((z, a, x), _) in &self.subst_table {
            for ((atom, ty), label) in &self.atom_table {
                if atom == a && label == z {
                    cells.suba.push(SubaCell {
                        ctx: Context::new().with_atom(*a, ty.clone()),
                        atom: *a,
                        ty: ty.clone(),
                        arg: x.clone(),
                    });
                }
            }
            cells.subfresh.push(SubFreshCell {
                z: z.clone(),
                atom: *a,
                arg: x.clone(),
            });
        }

        for (fun, arg_elem) in self.app_table.keys() {
            for (atom, arg) in &pairs {
                cells.subapp.push(SubAppCell {
                    fun: fun.clone(),
                    arg_elem: arg_elem.clone(),
                    atom: *atom,
                    arg: arg.clone(),
                });
            }
        }

        for (binder, binder_ty, z) in self.abs_table.keys() {
            for (atom, arg) in &pairs {
                cells.sublam.push(SubLamCell {
                    binder: *binder,
                    binder_ty: binder_ty.clone(),
                    z: z.clone(),
                    atom: *atom,
                    arg: arg.clone(),
                });
            }
        }

        for z in &self.elements {
            for ((atom, ty), _) in &self.atom_table {
                cells.subid.push(SubIdCell {
                    ctx: Context::new().with_atom(*atom, ty.clone()),
                    z: z.clone(),
                    atom: *atom,
                    ty: ty.clone(),
                });
            }
        }

        Ok(cells)
    }
}

pub fn load_finite_model(path: impl AsRef<Path>) -> Result<FiniteModel, FiniteModelError> {
    let text = std::fs::read_to_string(path.as_ref())
        .map_err(|e| FiniteModelError::Io(format!("{}: {e}", path.as_ref().display())))?;
    parse_finite_model(&text)
}

#[derive(Clone, PartialEq, Debug)]
enum Tok {
    Ident(String),
    DownName(String),
    LBrack,
    RBrack,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Colon,
    Assign,
    Eq,
    Comma,
    Arrow,
}

fn ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn tokenize(line: &str, lineno: usize) -> Result<Vec<Tok>, FiniteModelError> {
    let mut toks = Vec::new();
    let mut chars = line.chars().peekable();
    let err = |msg: String| FiniteModelError::Parse { line: lineno, msg };
    while let Some(&c) = chars.peek() {
        match c {
            ' ' | '\t' => {
                chars.next();
            }
            '[' => {
                chars.next();
                toks.push(Tok::LBrack);
            }
            ']' => {
                chars.next();
                toks.push(Tok::RBrack);
            }
            '(' => {
                chars.next();
                toks.push(Tok::LParen);
            }
            ')' => {
                chars.next();
                toks.push(Tok::RParen);
            }
            '{' => {
                chars.next();
                toks.push(Tok::LBrace);
            }
            '}' => {
                chars.next();
                toks.push(Tok::RBrace);
            }
            ',' => {
                chars.next();
                toks.push(Tok::Comma);
            }
            '=' => {
                chars.next();
                toks.push(Tok::Eq);
            }
            ':' => {
                chars.next();
                if chars.peek() == Some(&'=') {
                    chars.next();
                    toks.push(Tok::Assign);
                } else {
                    toks.push(Tok::Colon);
                }
            }
            '-' => {
                chars.next();
                if chars.peek() == Some(&'>') {
                    chars.next();
                    toks.push(Tok::Arrow);
                } else {
                    return Err(err("stray '-'".to_string()));
                }
            }
            '\'' => {
                chars.next();
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if ident_char(c) {
                        s.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                if s.is_empty() {
                    return Err(err("apostrophe without an atom name".to_string()));
                }
                toks.push(Tok::DownName(s));
            }
            c if ident_char(c) => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if ident_char(c) {
                        s.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                toks.push(Tok::Ident(s));
            }
            other => return Err(err(format!("unexpected character {other:?}"))),
        }
    }
    Ok(toks)
}

struct Rows {
    bases: Vec<String>,
    carriers: Vec<(CtxKey, SimpleType, Vec<Label>)>,
    atoms: Vec<(Atom, SimpleType, Label)>,
    consts: Vec<(String, SimpleType, Label)>,
    abs: Vec<(Atom, SimpleType, Label, Label)>,
    apps: Vec<(Label, Label, Label)>,
    substs: Vec<(Label, Atom, Label, Label)>,
    perms: Vec<(Atom, Atom, Label, Label)>,
    supps: Vec<(Label, BTreeSet<Atom>)>,
}

struct LineParser {
    toks: Vec<Tok>,
    at: usize,
    line: usize,
}

impl LineParser {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, FiniteModelError> {
        Err(FiniteModelError::Parse {
            line: self.line,
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).cloned();
        if t.is_some() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok) -> Result<(), FiniteModelError> {
        match self.next() {
            Some(t) if t == tok => Ok(()),
            other => self.err(format!("expected {tok:?}, found {other:?}")),
        }
    }

    fn atom(&mut self) -> Result<Atom, FiniteModelError> {
        match self.next() {
            Some(Tok::Ident(s)) => Atom::parse_name(&s)
                .ok_or(())
                .or_else(|_| self.err(format!("`{s}` is not an atom name"))),
            Some(Tok::DownName(s)) => Atom::parse_name(&format!("'{s}"))
                .ok_or(())
                .or_else(|_| self.err(format!("`'{s}` is not an atom name"))),
            other => self.err(format!("expected an atom, found {other:?}")),
        }
    }

    fn label(&mut self) -> Result<Label, FiniteModelError> {
        match self.next() {
            Some(Tok::Ident(s)) => Ok(Label(s)),
            other => self.err(format!("expected an element label, found {other:?}")),
        }
    }

    fn ty(&mut self) -> Result<SimpleType, FiniteModelError> {
        let head = match self.next() {
            Some(Tok::Ident(s)) => SimpleType::base(s),
            Some(Tok::LParen) => {
                let inner = self.ty()?;
                self.expect(Tok::RParen)?;
                inner
            }
            other => return self.err(format!("expected a type, found {other:?}")),
        };
        if self.peek() == Some(&Tok::Arrow) {
            self.next();
            Ok(SimpleType::arrow(head, self.ty()?))
        } else {
            Ok(head)
        }
    }

    fn ctx_key(&mut self) -> Result<CtxKey, FiniteModelError> {
        self.expect(Tok::LBrack)?;
        let mut key = CtxKey::new();
        if self.peek() == Some(&Tok::RBrack) {
            self.next();
            return Ok(key);
        }
        loop {
            let atom = self.atom()?;
            self.expect(Tok::Colon)?;
            let ty = self.ty()?;
            if key.insert(atom, ty).is_some() {
                return self.err(format!("atom {atom} typed twice in one context"));
            }
            match self.next() {
                Some(Tok::Comma) => continue,
                Some(Tok::RBrack) => return Ok(key),
                other => return self.err(format!("expected `,` or `]`, found {other:?}")),
            }
        }
    }

    fn done(&mut self) -> Result<(), FiniteModelError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => {
                let t = t.clone();
                self.err(format!("trailing {t:?}"))
            }
        }
    }
}

pub fn parse_finite_model(text: &str) -> Result<FiniteModel, FiniteModelError> {
    let mut rows = Rows {
        bases: Vec::new(),
        carriers: Vec::new(),
        atoms: Vec::new(),
        consts: Vec::new(),
        abs: Vec::new(),
        apps: Vec::new(),
        substs: Vec::new(),
        perms: Vec::new(),
        supps: Vec::new(),
    };

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = match raw.find("--") {
            Some(at) => &raw[..at],
            None => raw,
        };
        let toks = tokenize(line, lineno)?;
        if toks.is_empty() {
            continue;
        }
        let mut p = LineParser {
            toks,
            at: 0,
            line: lineno,
        };
        let keyword = match p.next() {
            Some(Tok::Ident(s)) => s,
            other => return p.err(format!("expected a directive, found {other:?}")),
        };
        match keyword.as_str() {
            "base" => {
                while let Some(tok) = p.next() {
                    match tok {
                        Tok::Ident(s) => rows.bases.push(s),
                        other => return p.err(format!("expected a base type name, found {other:?}")),
                    }
                }
            }
            "carrier" => {
                let key = p.ctx_key()?;
                let ty = p.ty()?;
                p.expect(Tok::Eq)?;
                let mut labels = Vec::new();
                while p.peek().is_some() {
                    labels.push(p.label()?);
                }
                rows.carriers.push((key, ty, labels));
            }
            "atom" => {
                let a = p.atom()?;
                p.expect(Tok::Colon)?;
                let ty = p.ty()?;
                p.expect(Tok::Eq)?;
                let label = p.label()?;
                p.done()?;
                rows.atoms.push((a, ty, label));
            }
            "const" => {
                let name = match p.next() {
                    Some(Tok::Ident(s)) => s,
                    other => return p.err(format!("expected a constant name, found {other:?}")),
                };
                p.expect(Tok::Colon)?;
                let ty = p.ty()?;
                p.expect(Tok::Eq)?;
                let label = p.label()?;
                p.done()?;
                rows.consts.push((name, ty, label));
            }
            "abs" => {
                p.expect(Tok::LBrack)?;
                let a = p.atom()?;
                p.expect(Tok::Colon)?;
                let ty = p.ty()?;
                p.expect(Tok::RBrack)?;
                let z = p.label()?;
                p.expect(Tok::Eq)?;
                let w = p.label()?;
                p.done()?;
                rows.abs.push((a, ty, z, w));
            }
            "app" => {
                let f = p.label()?;
                let x = p.label()?;
                p.expect(Tok::Eq)?;
                let w = p.label()?;
                p.done()?;
                rows.apps.push((f, x, w));
            }
            "subst" => {
                let z = p.label()?;
                p.expect(Tok::LBrack)?;
                let a = p.atom()?;
                p.expect(Tok::Assign)?;
                let x = p.label()?;
                p.expect(Tok::RBrack)?;
                p.expect(Tok::Eq)?;
                let w = p.label()?;
                p.done()?;
                rows.substs.push((z, a, x, w));
            }
            "perm" => {
                p.expect(Tok::LParen)?;
                let a = p.atom()?;
                let b = p.atom()?;
                p.expect(Tok::RParen)?;
                let z = p.label()?;
                p.expect(Tok::Eq)?;
                let w = p.label()?;
                p.done()?;
                if a == b {
                    return p.err("swap rows need two distinct atoms".to_string());
                }
                rows.perms.push((a, b, z, w));
            }
            "supp" => {
                let z = p.label()?;
                p.expect(Tok::Eq)?;
                p.expect(Tok::LBrace)?;
                let mut atoms = BTreeSet::new();
                loop {
                    match p.peek() {
                        Some(Tok::RBrace) => {
                            p.next();
                            break;
                        }
                        Some(_) => {
                            atoms.insert(p.atom()?);
                        }
                        None => return p.err("unterminated supp set".to_string()),
                    }
                }
                p.done()?;
                rows.supps.push((z, atoms));
            }
            other => return p.err(format!("unknown directive `{other}`")),
        }
    }

    assemble(rows)
}

fn assemble(rows: Rows) -> Result<FiniteModel, FiniteModelError> {
    let mut sig = Signature::new(rows.bases.iter().cloned())
        .map_err(FiniteModelError::Signature)?;
    for (name, ty, _) in &rows.consts {
        sig.add_constant(name, ty.clone())?;
    }

    let mut elements = BTreeSet::new();
    let mut carriers: BTreeMap<(CtxKey, SimpleType), BTreeSet<Label>> = BTreeMap::new();
    for (key, ty, labels) in rows.carriers {
        let entry = carriers.entry((key, ty)).or_default();
        for l in labels {
            elements.insert(l.clone());
            entry.insert(l);
        }
    }

    let check = |l: &Label| -> Result<(), FiniteModelError> {
        if elements.contains(l) {
            Ok(())
        } else {
            Err(FiniteModelError::DanglingLabel(l.clone()))
        }
    };

    let mut atom_table = BTreeMap::new();
    for (a, ty, l) in rows.atoms {
        check(&l)?;
        atom_table.insert((a, ty), l);
    }
    let mut const_table = BTreeMap::new();
    for (name, _, l) in rows.consts {
        check(&l)?;
        const_table.insert(name, l);
    }
    let mut abs_table = BTreeMap::new();
    for (a, ty, z, w) in rows.abs {
        check(&z)?;
        check(&w)?;
        abs_table.insert((a, ty, z), w);
    }
    let mut app_table = BTreeMap::new();
    for (f, x, w) in rows.apps {
        check(&f)?;
        check(&x)?;
        check(&w)?;
        app_table.insert((f, x), w);
    }
    let mut subst_table = BTreeMap::new();
    for (z, a, x, w) in rows.substs {
        check(&z)?;
        check(&x)?;
        check(&w)?;
        subst_table.insert((z, a, x), w);
    }
    let mut supp_table: BTreeMap<Label, BTreeSet<Atom>> = BTreeMap::new();
    for (z, atoms) in rows.supps {
        check(&z)?;
        supp_table.insert(z, atoms);
    }
    for l in &elements {
        if !supp_table.contains_key(l) {
            return Err(FiniteModelError::MissingSupp(l.clone()));
        }
    }

    // swap rows: normalize the key order, close under the involution, and
    // refuse rows that move an element both atoms are fresh for
    let mut perm_table: BTreeMap<(Atom, Atom, Label), Label> = BTreeMap::new();
    let mut insert_perm = |a: Atom, b: Atom, z: Label, w: Label| -> Result<(), FiniteModelError> {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        match perm_table.insert((lo, hi, z.clone()), w.clone()) {
            Some(prev) if prev != w => Err(FiniteModelError::NonBijectivePerm { a: lo, b: hi }),
            _ => Ok(()),
        }
    };
    for (a, b, z, w) in &rows.perms {
        check(z)?;
        check(w)?;
        let supp = supp_table.get(z).expect("supp checked above");
        if !supp.contains(a) && !supp.contains(b) && z != w {
            return Err(FiniteModelError::PermMovesSupported {
                a: *a,
                b: *b,
                label: z.clone(),
            });
        }
        // closing under the involution makes any non-bijective table clash
        insert_perm(*a, *b, z.clone(), w.clone())?;
        insert_perm(*a, *b, w.clone(), z.clone())?;
    }

    // supports stay inside every carrier context containing the element
    for ((key, _), els) in &carriers {
        for l in els {
            for atom in supp_table.get(l).expect("supp checked above") {
                if !key.contains_key(atom) {
                    return Err(FiniteModelError::SupportOutsideContext {
                        label: l.clone(),
                        atom: *atom,
                    });
                }
            }
        }
    }

    // declared carriers respect context intersection where all three exist
    let keys: Vec<(CtxKey, SimpleType)> = carriers.keys().cloned().collect();
    for (k1, ty1) in &keys {
        for (k2, ty2) in &keys {
            if ty1 != ty2 || k1 >= k2 {
                continue;
            }
            let meet: CtxKey = k1
                .iter()
                .filter(|(a, ty)| k2.get(a) == Some(ty))
                .map(|(a, ty)| (*a, ty.clone()))
                .collect();
            if let Some(meet_els) = carriers.get(&(meet, ty1.clone())) {
                let lhs: BTreeSet<Label> = carriers[&(k1.clone(), ty1.clone())]
                    .intersection(&carriers[&(k2.clone(), ty2.clone())])
                    .cloned()
                    .collect();
                if &lhs != meet_els {
                    return Err(FiniteModelError::CarrierIntersection(ty1.clone()));
                }
            }
        }
    }

    Ok(FiniteModel {
        sig,
        elements,
        carriers,
        atom_table,
        const_table,
        abs_table,
        app_table,
        subst_table,
        perm_table,
        supp_table,
    })
}
