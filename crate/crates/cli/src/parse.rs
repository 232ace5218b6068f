//! Recursive-descent parser for terms, types, substitution lists, and
//! source files.
//!
//! Concrete syntax for terms:
//!
//! ```text
//! \a:t. X['b := a] c
//! ```
//!
//! Lowercase single-letter identifiers (optionally followed by digits and
//! primes, e.g. `b1`, `c''`) are up atoms; with a leading apostrophe they
//! are down atoms. Capitalized identifiers resolve to declared constants
//! first, otherwise unknowns; only unknowns may carry a moderation.
//! Application is juxtaposition and associates left; `->` in types
//! associates right; `--` starts a line comment.

use holc_core::atoms::Atom;
use holc_core::subst::{SubstL1, SubstL2};
use holc_core::syntax::{SimpleType, Signature, Term, UnknownName};

use crate::lex::{lex, Diagnostic, Span, Tok};

pub(crate) struct Parser {
    toks: Vec<(Tok, Span)>,
    pub(crate) at: usize,
    pub(crate) sig: Signature,
}

/// Source-file item keywords; they are not valid term leaves, so an
/// application stops in front of them.
pub(crate) const KEYWORDS: [&str; 7] = ["base", "const", "atom", "unknown", "def", "val", "model"];

impl Parser {
    pub(crate) fn new(src: &str, sig: &Signature) -> Result<Self, Diagnostic> {
        Ok(Parser {
            toks: lex(src)?,
            at: 0,
            sig: sig.clone(),
        })
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    pub(crate) fn peek_span(&self) -> Span {
        self.toks[self.at].1
    }

    pub(crate) fn bump(&mut self) -> (Tok, Span) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    pub(crate) fn expect(&mut self, tok: &Tok) -> Result<Span, Diagnostic> {
        let (t, span) = self.bump();
        if &t == tok {
            Ok(span)
        } else {
            Err(Diagnostic::at(span, format!("expected {tok}, found {t}")))
        }
    }

    pub(crate) fn expect_eof(&self) -> Result<(), Diagnostic> {
        match self.peek() {
            Tok::Eof => Ok(()),
            t => Err(Diagnostic::at(
                self.peek_span(),
                format!("unexpected trailing input: {t}"),
            )),
        }
    }

    fn atom_from(&self, name: &str, down: bool, span: Span) -> Result<Atom, Diagnostic> {
        let spelled = if down {
            format!("'{name}")
        } else {
            name.to_string()
        };
        Atom::parse_name(&spelled).ok_or_else(|| {
            Diagnostic::at(
                span,
                format!(
                    "`{spelled}` is not a valid atom name (a single letter, then digits, then primes)"
                ),
            )
        })
    }

    pub(crate) fn parse_type(&mut self) -> Result<SimpleType, Diagnostic> {
        let head = match self.bump() {
            (Tok::Ident(name), span) => {
                if !self.sig.has_base_type(&name) {
                    return Err(Diagnostic::at(span, format!("undeclared base type `{name}`")));
                }
                SimpleType::base(name)
            }
            (Tok::LParen, _) => {
                let inner = self.parse_type()?;
                self.expect(&Tok::RParen)?;
                inner
            }
            (t, span) => return Err(Diagnostic::at(span, format!("expected a type, found {t}"))),
        };
        if self.peek() == &Tok::Arrow {
            self.bump();
            Ok(SimpleType::arrow(head, self.parse_type()?))
        } else {
            Ok(head)
        }
    }

    pub(crate) fn parse_term(&mut self) -> Result<Term, Diagnostic> {
        if self.peek() == &Tok::Backslash {
            self.bump();
            let (binder, span) = match self.bump() {
                (Tok::Ident(s), span) => (self.atom_from(&s, false, span)?, span),
                (Tok::DownIdent(s), span) => (self.atom_from(&s, true, span)?, span),
                (t, span) => {
                    return Err(Diagnostic::at(span, format!("expected a binder atom, found {t}")))
                }
            };
            if binder.is_down() {
                return Err(Diagnostic::at(
                    span,
                    format!("down atom `{binder}` cannot be a lambda binder"),
                ));
            }
            self.expect(&Tok::Colon)?;
            let ty = self.parse_type()?;
            self.expect(&Tok::Dot)?;
            let body = self.parse_term()?;
            return Ok(Term::lam(binder, ty, body));
        }
        let mut head = self.parse_atomic()?;
        while self.starts_atomic() {
            let arg = self.parse_atomic()?;
            head = Term::app(head, arg);
        }
        Ok(head)
    }

    /// Whether the next token can begin an application argument.
    fn starts_atomic(&self) -> bool {
        match self.peek() {
            Tok::LParen | Tok::DownIdent(_) => true,
            Tok::Ident(name) => {
                if KEYWORDS.contains(&name.as_str()) {
                    return false;
                }
                self.sig.constant_type(name).is_some()
                    || name.starts_with(char::is_uppercase)
                    || Atom::parse_name(name).is_some()
            }
            _ => false,
        }
    }

    fn parse_atomic(&mut self) -> Result<Term, Diagnostic> {
        match self.bump() {
            (Tok::LParen, _) => {
                let inner = self.parse_term()?;
                self.expect(&Tok::RParen)?;
                Ok(inner)
            }
            (Tok::DownIdent(s), span) => Ok(Term::atom(self.atom_from(&s, true, span)?)),
            (Tok::Ident(name), span) => {
                if self.sig.constant_type(&name).is_some() {
                    if self.peek() == &Tok::LBrack {
                        return Err(Diagnostic::at(
                            self.peek_span(),
                            format!("constant `{name}` cannot carry a moderation"),
                        ));
                    }
                    Ok(Term::constant(name))
                } else if name.starts_with(char::is_uppercase) {
                    let mods = if self.peek() == &Tok::LBrack {
                        self.parse_moderation()?
                    } else {
                        Vec::new()
                    };
                    Ok(Term::moderated(UnknownName::new(name), mods))
                } else {
                    let atom = self.atom_from(&name, false, span)?;
                    if self.peek() == &Tok::LBrack {
                        return Err(Diagnostic::at(
                            self.peek_span(),
                            "only unknowns carry a moderation",
                        ));
                    }
                    Ok(Term::atom(atom))
                }
            }
            (t, span) => Err(Diagnostic::at(span, format!("expected a term, found {t}"))),
        }
    }

    fn parse_moderation(&mut self) -> Result<Vec<(Atom, Term)>, Diagnostic> {
        self.expect(&Tok::LBrack)?;
        let mut mods: Vec<(Atom, Term)> = Vec::new();
        if self.peek() == &Tok::RBrack {
            self.bump();
            return Ok(mods);
        }
        loop {
            let (atom, span) = match self.bump() {
                (Tok::DownIdent(s), span) => (self.atom_from(&s, true, span)?, span),
                (Tok::Ident(s), span) => (self.atom_from(&s, false, span)?, span),
                (t, span) => {
                    return Err(Diagnostic::at(span, format!("expected a moderation atom, found {t}")))
                }
            };
            if atom.is_up() {
                return Err(Diagnostic::at(
                    span,
                    format!("moderation domain atom `{atom}` must be a down atom"),
                ));
            }
            if mods.iter().any(|(b, _)| *b == atom) {
                return Err(Diagnostic::at(
                    span,
                    format!("moderation mentions `{atom}` twice"),
                ));
            }
            self.expect(&Tok::Assign)?;
            let range = self.parse_term()?;
            mods.push((atom, range));
            match self.bump() {
                (Tok::Comma, _) => continue,
                (Tok::RBrack, _) => return Ok(mods),
                (t, span) => {
                    return Err(Diagnostic::at(span, format!("expected `,` or `]`, found {t}")))
                }
            }
        }
    }
}

/// Parse a complete term. Capitalized identifiers resolve against the
/// signature's constants first and fall back to unknowns.
pub fn parse_term(src: &str, sig: &Signature) -> Result<Term, Diagnostic> {
    let mut p = Parser::new(src, sig)?;
    let t = p.parse_term()?;
    p.expect_eof()?;
    Ok(t)
}

pub fn parse_type(src: &str, sig: &Signature) -> Result<SimpleType, Diagnostic> {
    let mut p = Parser::new(src, sig)?;
    let t = p.parse_type()?;
    p.expect_eof()?;
    Ok(t)
}

/// Parse a level-1 substitution list `a := s, 'b := t`.
pub fn parse_subst_l1(src: &str, sig: &Signature) -> Result<SubstL1, Diagnostic> {
    let mut p = Parser::new(src, sig)?;
    let mut out = SubstL1::new();
    loop {
        let (atom, span) = match p.bump() {
            (Tok::Ident(s), span) => {
                let spelled = s.clone();
                match Atom::parse_name(&spelled) {
                    Some(a) => (a, span),
                    None => {
                        return Err(Diagnostic::at(span, format!("`{spelled}` is not an atom name")))
                    }
                }
            }
            (Tok::DownIdent(s), span) => match Atom::parse_name(&format!("'{s}")) {
                Some(a) => (a, span),
                None => return Err(Diagnostic::at(span, format!("`'{s}` is not an atom name"))),
            },
            (t, span) => return Err(Diagnostic::at(span, format!("expected an atom, found {t}"))),
        };
        if out.get(atom).is_some() {
            return Err(Diagnostic::at(span, format!("atom `{atom}` substituted twice")));
        }
        p.expect(&Tok::Assign)?;
        let term = p.parse_term()?;
        out.insert(atom, term);
        match p.bump() {
            (Tok::Comma, _) => continue,
            (Tok::Eof, _) => return Ok(out),
            (t, span) => return Err(Diagnostic::at(span, format!("expected `,`, found {t}"))),
        }
    }
}

/// Parse a level-2 substitution list `X := t, Y := s`.
pub fn parse_subst_l2(src: &str, sig: &Signature) -> Result<SubstL2, Diagnostic> {
    let mut p = Parser::new(src, sig)?;
    let mut out = SubstL2::new();
    loop {
        let name = match p.bump() {
            (Tok::Ident(s), span) => {
                if !s.starts_with(char::is_uppercase) || sig.constant_type(&s).is_some() {
                    return Err(Diagnostic::at(span, format!("`{s}` is not an unknown")));
                }
                UnknownName::new(s)
            }
            (t, span) => return Err(Diagnostic::at(span, format!("expected an unknown, found {t}"))),
        };
        p.expect(&Tok::Assign)?;
        let term = p.parse_term()?;
        out.insert(name, term);
        match p.bump() {
            (Tok::Comma, _) => continue,
            (Tok::Eof, _) => return Ok(out),
            (t, span) => return Err(Diagnostic::at(span, format!("expected `,`, found {t}"))),
        }
    }
}
