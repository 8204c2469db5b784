//! Canonical text for expressions. Parsing the output yields the same tree.

use super::ast::{BinOp, Expr};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FormatStyle {
    /// Only the parentheses the grammar needs.
    #[default]
    Minimal,
    /// Every operator application wrapped in parentheses.
    Full,
}

pub fn format_expression(e: &Expr) -> String {
    format_expression_with(e, FormatStyle::Minimal)
}

pub fn format_expression_with(e: &Expr, style: FormatStyle) -> String {
    let mut out = String::new();
    write(e, style, &mut out);
    out
}

// Binding strength: + - = 1, * / = 2, unary minus = 3, ^ = 4, atoms = 5.
fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
        Expr::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
        Expr::Neg(_) => 3,
        Expr::Bin(BinOp::Pow, ..) => 4,
        Expr::Num { text, .. } if text.starts_with('-') => 3,
        _ => 5,
    }
}

fn child(e: &Expr, min: u8, style: FormatStyle, out: &mut String) {
    let wrap = prec(e) < min || (style == FormatStyle::Full && prec(e) < 5);
    if wrap {
        out.push('(');
    }
    write(e, style, out);
    if wrap {
        out.push(')');
    }
}

fn write(e: &Expr, style: FormatStyle, out: &mut String) {
    match e {
        Expr::Num { text, .. } => out.push_str(text),
        Expr::Const(n) | Expr::Param(n) | Expr::Bound(n) => out.push_str(n),
        Expr::Neg(x) => {
            out.push('-');
            child(x, 3, style, out);
        }
        Expr::Bin(op, l, r) => {
            let (lmin, rmin) = match op {
                BinOp::Add | BinOp::Sub => (1, 2),
                BinOp::Mul | BinOp::Div => (2, 3),
                BinOp::Pow => (5, 3),
            };
            child(l, lmin, style, out);
            match op {
                BinOp::Add | BinOp::Sub => {
                    out.push(' ');
                    out.push_str(op.symbol());
                    out.push(' ');
                }
                _ => out.push_str(op.symbol()),
            }
            child(r, rmin, style, out);
        }
        Expr::Call(name, args) => {
            out.push_str(name);
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write(a, style, out);
            }
            out.push(')');
        }
        Expr::Sum { var, lo, hi, body } => {
            out.push_str("sum(");
            out.push_str(var);
            out.push_str(", ");
            write(lo, style, out);
            out.push_str(", ");
            write(hi, style, out);
            out.push_str(", ");
            write(body, style, out);
            out.push(')');
        }
        Expr::Integral { var, body } => {
            out.push_str("integral(");
            out.push_str(var);
            out.push_str(", 0, inf, ");
            write(body, style, out);
            out.push(')');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse_expression;
    use super::*;

    fn rt(s: &str) -> String {
        let e = parse_expression(s).unwrap();
        let f = format_expression(&e);
        assert_eq!(parse_expression(&f).unwrap(), e, "{s} -> {f}");
        let g = format_expression_with(&e, FormatStyle::Full);
        assert_eq!(parse_expression(&g).unwrap(), e, "{s} -> {g}");
        f
    }

    #[test]
    fn minimal_parentheses() {
        assert_eq!(rt("(a+b)*c"), "(a + b)*c");
        assert_eq!(rt("a-(b-c)"), "a - (b - c)");
        assert_eq!(rt("(a-b)-c"), "a - b - c");
        assert_eq!(rt("(-2)^2"), "(-2)^2");
        assert_eq!(rt("-2^2"), "-2^2");
        assert_eq!(rt("(2^3)^2"), "(2^3)^2");
        assert_eq!(rt("2^3^2"), "2^3^2");
        assert_eq!(rt("a/(b*c)"), "a/(b*c)");
        assert_eq!(rt("2^(-x)"), "2^-x");
        assert_eq!(rt("-(-a)"), "--a");
        assert_eq!(rt("1.50e-3*x"), "1.50e-3*x");
    }

    #[test]
    fn special_forms() {
        assert_eq!(rt("sum(j,0,n, j^2)"), "sum(j, 0, n, j^2)");
        assert_eq!(rt("integral(v,0,inf,exp(-v))"), "integral(v, 0, inf, exp(-v))");
    }

    #[test]
    fn full_style_parenthesises_operators() {
        let e = parse_expression("a + b*c").unwrap();
        assert_eq!(format_expression_with(&e, FormatStyle::Full), "a + (b*c)");
        let e = parse_expression("-a^2").unwrap();
        assert_eq!(format_expression_with(&e, FormatStyle::Full), "-(a^2)");
    }
}
