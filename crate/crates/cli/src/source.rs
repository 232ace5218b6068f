//! Source files: a signature block, a context block, named definitions, an
//! optional valuation block, and an optional model reference.
//!
//! ```text
//! -- declarations come before use
//! base t
//! const K : t->t->t
//! atom c : t            -- an up atom typing
//! atom 'b : t           -- a down atom typing
//! unknown X : t
//!
//! def incomplete = \a:t. X['b := a]
//! val X = 'b
//! model "ex415.model"
//! ```
//!
//! Valuation right-hand sides are terms when interpreting in the term
//! model; a bare identifier that is not a term is kept as an element label
//! for use with a finite model.

use holc_core::syntax::{Signature, Term, UnknownName};
use holc_core::typing::Context;

use crate::lex::{Diagnostic, Span, Tok};
use crate::parse::{Parser, KEYWORDS};

#[derive(Clone, PartialEq, Debug)]
pub enum ValRhs {
    /// A term, interpreted in the term model as its beta-class.
    TermRhs(Term),
    /// An element label, resolved against a finite model.
    NameRhs(String),
}

#[derive(Clone, PartialEq, Debug)]
pub struct ValEntry {
    pub unknown: UnknownName,
    pub rhs: ValRhs,
    pub span: Span,
}

#[derive(Clone, PartialEq, Debug)]
pub struct SourceFile {
    pub sig: Signature,
    pub ctx: Context,
    pub defs: Vec<(String, Term)>,
    pub vals: Vec<ValEntry>,
    pub model_ref: Option<String>,
}

impl SourceFile {
    pub fn def(&self, name: &str) -> Option<&Term> {
        self.defs
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, t)| t)
    }
}

pub fn load_source(path: impl AsRef<std::path::Path>) -> Result<SourceFile, Vec<Diagnostic>> {
    let text = std::fs::read_to_string(path.as_ref()).map_err(|e| {
        vec![Diagnostic::bare(format!(
            "could not read {}: {e}",
            path.as_ref().display()
        ))]
    })?;
    parse_source(&text)
}

pub fn parse_source(src: &str) -> Result<SourceFile, Vec<Diagnostic>> {
    let placeholder = Signature::single_base("\u{1}pending");
    let mut p = Parser::new(src, &placeholder).map_err(|d| vec![d])?;
    let mut diags: Vec<Diagnostic> = Vec::new();

    let mut bases: Vec<String> = Vec::new();
    let mut ctx = Context::new();
    let mut defs: Vec<(String, Term)> = Vec::new();
    let mut vals: Vec<ValEntry> = Vec::new();
    let mut model_ref: Option<String> = None;

    loop {
        let span = p.peek_span();
        let keyword = match p.peek().clone() {
            Tok::Eof => break,
            Tok::Ident(s) if KEYWORDS.contains(&s.as_str()) => {
                p.bump();
                s
            }
            t => {
                diags.push(Diagnostic::at(
                    span,
                    format!("expected an item (base/const/atom/unknown/def/val/model), found {t}"),
                ));
                skip_item(&mut p);
                continue;
            }
        };
        let item = parse_item(&mut p, &keyword, span, &mut bases, &mut ctx, &mut defs, &mut vals, &mut model_ref);
        if let Err(d) = item {
            diags.push(d);
            skip_item(&mut p);
        }
    }

    if bases.is_empty() {
        diags.push(Diagnostic::bare("a source file declares at least one base type"));
    }
    if !diags.is_empty() {
        return Err(diags);
    }
    Ok(SourceFile {
        sig: p.sig,
        ctx,
        defs,
        vals,
        model_ref,
    })
}

fn skip_item(p: &mut Parser) {
    loop {
        match p.peek() {
            Tok::Eof => return,
            Tok::Ident(s) if KEYWORDS.contains(&s.as_str()) => return,
            _ => {
                p.bump();
            }
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn parse_item(
    p: &mut Parser,
    keyword: &str,
    span: Span,
    bases: &mut Vec<String>,
    ctx: &mut Context,
    defs: &mut Vec<(String, Term)>,
    vals: &mut Vec<ValEntry>,
    model_ref: &mut Option<String>,
) -> Result<(), Diagnostic> {
    match keyword {
        "base" => {
            let mut any = false;
            while let Tok::Ident(name) = p.peek().clone() {
                if KEYWORDS.contains(&name.as_str()) {
                    break;
                }
                p.bump();
                if !bases.contains(&name) {
                    bases.push(name.clone());
                }
                any = true;
            }
            if !any {
                return Err(Diagnostic::at(span, "`base` needs at least one type name"));
            }
            rebuild_sig(p, bases)?;
            Ok(())
        }
        "const" => {
            let (name, nspan) = expect_capitalized(p, "constant")?;
            p.expect(&Tok::Colon)?;
            let ty = p.parse_type()?;
            if p.sig.constant_type(&name).is_some() {
                return Err(Diagnostic::at(nspan, format!("constant `{name}` declared twice")));
            }
            let mut sig = p.sig.clone();
            sig.add_constant(&name, ty)
                .map_err(|e| Diagnostic::at(nspan, e.to_string()))?;
            p.sig = sig;
            Ok(())
        }
        "atom" => {
            let (atom, aspan) = match p.bump() {
                (Tok::Ident(s), sp) => (
                    holc_core::Atom::parse_name(&s)
                        .ok_or_else(|| Diagnostic::at(sp, format!("`{s}` is not an atom name")))?,
                    sp,
                ),
                (Tok::DownIdent(s), sp) => (
                    holc_core::Atom::parse_name(&format!("'{s}"))
                        .ok_or_else(|| Diagnostic::at(sp, format!("`'{s}` is not an atom name")))?,
                    sp,
                ),
                (t, sp) => return Err(Diagnostic::at(sp, format!("expected an atom, found {t}"))),
            };
            p.expect(&Tok::Colon)?;
            let ty = p.parse_type()?;
            if ctx.has_atom(atom) {
                return Err(Diagnostic::at(aspan, format!("atom `{atom}` typed twice")));
            }
            ctx.insert_atom(atom, ty);
            Ok(())
        }
        "unknown" => {
            let (name, nspan) = expect_capitalized(p, "unknown")?;
            if p.sig.constant_type(&name).is_some() {
                return Err(Diagnostic::at(
                    nspan,
                    format!("`{name}` is already a constant; constants shadow unknowns"),
                ));
            }
            p.expect(&Tok::Colon)?;
            let ty = p.parse_type()?;
            let unknown = UnknownName::new(name.clone());
            if ctx.unknown_type(&unknown).is_some() {
                return Err(Diagnostic::at(nspan, format!("unknown `{name}` typed twice")));
            }
            ctx.insert_unknown(unknown, ty);
            Ok(())
        }
        "def" => {
            let (name, nspan) = match p.bump() {
                (Tok::Ident(s), sp) => (s, sp),
                (t, sp) => {
                    return Err(Diagnostic::at(sp, format!("expected a definition name, found {t}")))
                }
            };
            if KEYWORDS.contains(&name.as_str()) {
                return Err(Diagnostic::at(nspan, format!("`{name}` is reserved")));
            }
            p.expect(&Tok::Equals)?;
            let term = p.parse_term()?;
            if defs.iter().any(|(n, _)| *n == name) {
                return Err(Diagnostic::at(nspan, format!("definition `{name}` repeated")));
            }
            defs.push((name, term));
            Ok(())
        }
        "val" => {
            let (name, nspan) = expect_capitalized(p, "unknown")?;
            p.expect(&Tok::Equals)?;
            let start = p.at;
            let rhs = match p.parse_term() {
                Ok(t) => ValRhs::TermRhs(t),
                Err(term_err) => {
                    p.at = start;
                    match p.bump() {
                        (Tok::Ident(s), _) if !KEYWORDS.contains(&s.as_str()) => ValRhs::NameRhs(s),
                        _ => return Err(term_err),
                    }
                }
            };
            vals.push(ValEntry {
                unknown: UnknownName::new(name),
                rhs,
                span: nspan,
            });
            Ok(())
        }
        "model" => {
            let path = match p.bump() {
                (Tok::Str(s), _) => s,
                (t, sp) => {
                    return Err(Diagnostic::at(sp, format!("expected a quoted path, found {t}")))
                }
            };
            if model_ref.is_some() {
                return Err(Diagnostic::at(span, "model reference given twice"));
            }
            *model_ref = Some(path);
            Ok(())
        }
        _ => unreachable!("keyword list is closed"),
    }
}

fn rebuild_sig(p: &mut Parser, bases: &[String]) -> Result<(), Diagnostic> {
    let mut sig = Signature::new(bases.iter().cloned())
        .map_err(|e| Diagnostic::bare(e.to_string()))?;
    for (name, ty) in p.sig.constants() {
        // constants were validated against an earlier, smaller base set
        sig.add_constant(name, ty.clone())
            .map_err(|e| Diagnostic::bare(e.to_string()))?;
    }
    p.sig = sig;
    Ok(())
}

fn expect_capitalized(p: &mut Parser, what: &str) -> Result<(String, Span), Diagnostic> {
    match p.bump() {
        (Tok::Ident(s), sp) if s.starts_with(char::is_uppercase) => Ok((s, sp)),
        (t, sp) => Err(Diagnostic::at(
            sp,
            format!("expected a capitalized {what} name, found {t}"),
        )),
    }
}
