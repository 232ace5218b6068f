//! Concrete syntax and file formats for the holc kernel: a lexer, a
//! recursive-descent parser for terms and source files, and the printer
//! that inverts the parser.

pub mod lex;
pub mod parse;
pub mod print;
pub mod source;

pub use lex::{Diagnostic, Span};
pub use parse::{parse_subst_l1, parse_subst_l2, parse_term, parse_type};
pub use print::print_term;
pub use source::{load_source, parse_source, SourceFile, ValEntry, ValRhs};
