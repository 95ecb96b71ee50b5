use super::{AtomSyntax, Formula};

// Operands that print as a single atom and can take a postfix or prefix
// repetition without extra parentheses.
fn is_tight<A>(f: &Formula<A>) -> bool {
    matches!(
        f,
        Formula::Atom(_) | Formula::Bot | Formula::Top | Formula::Power(..)
    ) || f.as_binary().is_some()
}

pub(super) fn write_formula<A: AtomSyntax>(f: &Formula<A>, out: &mut String) {
    match f {
        Formula::Atom(a) => a.write_atom(out),
        Formula::Bot => out.push('0'),
        Formula::Top => out.push('1'),
        Formula::Neg(g) => {
            out.push('~');
            write_formula(g, out);
        }
        Formula::Power(g, n) => {
            write_wrapped(g, is_tight(g), out);
            out.push('^');
            out.push_str(&n.to_string());
        }
        Formula::Multiple(n, g) => {
            out.push_str(&n.to_string());
            out.push('.');
            let bare = is_tight(g) && !matches!(**g, Formula::Power(..))
                || matches!(**g, Formula::Multiple(..));
            write_wrapped(g, bare, out);
        }
        _ => {
            let (op, l, r) = f.as_binary().expect("binary node");
            out.push('(');
            write_formula(l, out);
            out.push(' ');
            out.push_str(op.symbol());
            out.push(' ');
            write_formula(r, out);
            out.push(')');
        }
    }
}

fn write_wrapped<A: AtomSyntax>(f: &Formula<A>, bare: bool, out: &mut String) {
    if bare {
        write_formula(f, out);
    } else {
        out.push('(');
        write_formula(f, out);
        out.push(')');
    }
}
