//! The printer, inverse to the parser: `parse_term(print_term(t), sig)`
//! returns `t` exactly for any term whose constants are declared in `sig`.

use holc_core::syntax::Term;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Pos {
    Top,
    AppFun,
    AppArg,
}

pub fn print_term(t: &Term) -> String {
    let mut out = String::new();
    go(t, Pos::Top, &mut out);
    out
}

fn go(t: &Term, pos: Pos, out: &mut String) {
    match t {
        Term::Atom(a) => out.push_str(&a.name()),
        Term::Const(c) => out.push_str(c),
        Term::Unk { name, mods } => {
            out.push_str(name.as_str());
            if !mods.is_empty() {
                out.push('[');
                for (i, (b, s)) in mods.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push_str(&b.name());
                    out.push_str(":=");
                    go(s, Pos::Top, out);
                }
                out.push(']');
            }
        }
        Term::Lam { binder, ty, body } => {
            let parens = pos != Pos::Top;
            if parens {
                out.push('(');
            }
            out.push('\\');
            out.push_str(&binder.name());
            out.push(':');
            out.push_str(&ty.to_string());
            out.push_str(". ");
            go(body, Pos::Top, out);
            if parens {
                out.push(')');
            }
        }
        Term::App(f, x) => {
            let parens = pos == Pos::AppArg;
            if parens {
                out.push('(');
            }
            go(f, Pos::AppFun, out);
            out.push(' ');
            go(x, Pos::AppArg, out);
            if parens {
                out.push(')');
            }
        }
    }
}
