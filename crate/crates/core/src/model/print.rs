//! Writes models back in the text format accepted by the parser.

use std::fmt::Write;

use super::expr::{BinOp, Expr, UnOp};
use super::parse::decimal_is_exact;
use super::{Atom, Constraint, Ncsp};

/// Shortest decimal that reads back as `v`.
pub fn fmt_f64(v: f64) -> String {
    let s = format!("{v}");
    if s.len() > 24 {
        format!("{v:e}")
    } else {
        s
    }
}

fn write_const(out: &mut String, c: crate::interval::Interval) {
    let s = fmt_f64(c.lo());
    if c.is_degenerate() && decimal_is_exact(s.trim_start_matches('-')) {
        if c.lo() < 0.0 {
            let _ = write!(out, "(-{})", fmt_f64(-c.lo()));
        } else {
            out.push_str(&s);
        }
    } else {
        let _ = write!(out, "[{}, {}]", s, fmt_f64(c.hi()));
    }
}

fn write_expr(out: &mut String, e: &Expr, names: &[&str]) {
    match e {
        Expr::Const(c) => write_const(out, *c),
        Expr::Var(i) => out.push_str(names[*i]),
        Expr::Binary(op, a, b) => {
            let sym = match op {
                BinOp::Add => "+",
                BinOp::Sub => "-",
                BinOp::Mul => "*",
                BinOp::Div => "/",
                BinOp::Min | BinOp::Max => {
                    out.push_str(if *op == BinOp::Min { "min(" } else { "max(" });
                    write_expr(out, a, names);
                    out.push_str(", ");
                    write_expr(out, b, names);
                    out.push(')');
                    return;
                }
            };
            out.push('(');
            write_expr(out, a, names);
            let _ = write!(out, " {sym} ");
            write_expr(out, b, names);
            out.push(')');
        }
        Expr::Unary(UnOp::Neg, a) => {
            out.push_str("(-");
            write_expr(out, a, names);
            out.push(')');
        }
        Expr::Unary(UnOp::Sqr, a) => {
            write_base(out, a, names);
            out.push_str("^2");
        }
        Expr::Unary(op, a) => {
            out.push_str(op.name());
            out.push('(');
            write_expr(out, a, names);
            out.push(')');
        }
        Expr::Pow(a, r) => {
            write_base(out, a, names);
            if *r < 0.0 {
                let _ = write!(out, "^(-{})", fmt_f64(-r));
            } else {
                let _ = write!(out, "^{}", fmt_f64(*r));
            }
        }
        Expr::Piecewise(arms, otherwise) => {
            out.push_str("piecewise(");
            for (g, body) in arms {
                out.push('(');
                write_expr(out, &g.expr, names);
                let _ = write!(out, " {} 0) -> ", g.rel);
                write_expr(out, body, names);
                out.push_str("; ");
            }
            out.push_str("else -> ");
            write_expr(out, otherwise, names);
            out.push(')');
        }
    }
}

fn write_base(out: &mut String, e: &Expr, names: &[&str]) {
    if matches!(e, Expr::Pow(..) | Expr::Unary(UnOp::Sqr, _)) {
        out.push('(');
        write_expr(out, e, names);
        out.push(')');
    } else {
        write_expr(out, e, names);
    }
}

/// Expression text using the given variable names.
pub fn print_expr(e: &Expr, names: &[&str]) -> String {
    let mut s = String::new();
    write_expr(&mut s, e, names);
    s
}

fn print_atom(a: &Atom, names: &[&str]) -> String {
    format!("{} {} 0", print_expr(a.expr(), names), a.rel())
}

pub fn print_constraint(c: &Constraint, names: &[&str]) -> String {
    c.atoms().iter().map(|a| print_atom(a, names)).collect::<Vec<_>>().join(" or ")
}

/// Full problem text; `let` definitions appear inlined.
pub fn print_problem(p: &Ncsp) -> String {
    let names = p.var_names();
    let mut s = format!("problem {}\n", p.name());
    for v in p.vars() {
        let _ = writeln!(s, "var {} in [{}, {}]", v.name, fmt_f64(v.domain.lo()), fmt_f64(v.domain.hi()));
    }
    for c in p.constraints() {
        let _ = writeln!(s, "constraint {}", print_constraint(c, &names));
    }
    s
}
