//! Tokens and positions for the concrete syntax.

use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// A positioned diagnostic; parsing never panics.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Diagnostic {
    pub span: Option<Span>,
    pub msg: String,
}

impl Diagnostic {
    pub fn at(span: Span, msg: impl Into<String>) -> Self {
        Diagnostic {
            span: Some(span),
            msg: msg.into(),
        }
    }

    pub fn bare(msg: impl Into<String>) -> Self {
        Diagnostic {
            span: None,
            msg: msg.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.span {
            Some(span) => write!(f, "{span}: {}", self.msg),
            None => f.write_str(&self.msg),
        }
    }
}

impl std::error::Error for Diagnostic {}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Tok {
    Backslash,
    Colon,
    Assign, // :=
    Dot,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Arrow, // ->
    Equals,
    /// Bare identifier: atoms, constants, unknowns, keywords, type names,
    /// definition names, element labels.
    Ident(String),
    /// `'`-prefixed identifier: a down atom name (without the apostrophe).
    DownIdent(String),
    /// A double-quoted string, used for model file references.
    Str(String),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Backslash => f.write_str("`\\`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Assign => f.write_str("`:=`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBrack => f.write_str("`[`"),
            Tok::RBrack => f.write_str("`]`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::Equals => f.write_str("`=`"),
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::DownIdent(s) => write!(f, "`'{s}`"),
            Tok::Str(s) => write!(f, "\"{s}\""),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

pub fn lex(src: &str) -> Result<Vec<(Tok, Span)>, Diagnostic> {
    let mut toks = Vec::new();
    let mut line: u32 = 1;
    let mut col: u32 = 1;
    let mut chars = src.chars().peekable();

    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                col = 1;
            } else if c.is_some() {
                col += 1;
            }
            c
        }};
    }

    while let Some(&c) = chars.peek() {
        let span = Span { line, col };
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                bump!();
            }
            '-' => {
                bump!();
                match chars.peek() {
                    Some('>') => {
                        bump!();
                        toks.push((Tok::Arrow, span));
                    }
                    Some('-') => {
                        // comment to end of line
                        while let Some(&c) = chars.peek() {
                            if c == '\n' {
                                break;
                            }
                            bump!();
                        }
                    }
                    _ => return Err(Diagnostic::at(span, "stray `-` (expected `->` or `--`)")),
                }
            }
            '\\' => {
                bump!();
                toks.push((Tok::Backslash, span));
            }
            '.' => {
                bump!();
                toks.push((Tok::Dot, span));
            }
            '(' => {
                bump!();
                toks.push((Tok::LParen, span));
            }
            ')' => {
                bump!();
                toks.push((Tok::RParen, span));
            }
            '[' => {
                bump!();
                toks.push((Tok::LBrack, span));
            }
            ']' => {
                bump!();
                toks.push((Tok::RBrack, span));
            }
            ',' => {
                bump!();
                toks.push((Tok::Comma, span));
            }
            '=' => {
                bump!();
                toks.push((Tok::Equals, span));
            }
            ':' => {
                bump!();
                if chars.peek() == Some(&'=') {
                    bump!();
                    toks.push((Tok::Assign, span));
                } else {
                    toks.push((Tok::Colon, span));
                }
            }
            '"' => {
                bump!();
                let mut s = String::new();
                loop {
                    match bump!() {
                        Some('"') => break,
                        Some(c) if c != '\n' => s.push(c),
                        _ => return Err(Diagnostic::at(span, "unterminated string literal")),
                    }
                }
                toks.push((Tok::Str(s), span));
            }
            '\'' => {
                bump!();
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if ident_char(c) {
                        s.push(c);
                        bump!();
                    } else {
                        break;
                    }
                }
                if s.is_empty() {
                    return Err(Diagnostic::at(span, "apostrophe without an atom name"));
                }
                toks.push((Tok::DownIdent(s), span));
            }
            c if ident_char(c) => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if ident_char(c) {
                        s.push(c);
                        bump!();
                    } else {
                        break;
                    }
                }
                toks.push((Tok::Ident(s), span));
            }
            other => {
                return Err(Diagnostic::at(span, format!("unexpected character `{other}`")));
            }
        }
    }
    toks.push((
        Tok::Eof,
        Span { line, col },
    ));
    Ok(toks)
}
