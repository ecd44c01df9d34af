//! Expression trees over problem variables.

use crate::interval::Interval;

use super::Relation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Min,
    Max,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UnOp {
    Neg,
    Sqr,
    Sqrt,
    Exp,
    Ln,
    Abs,
}

impl UnOp {
    pub fn name(self) -> &'static str {
        match self {
            UnOp::Neg => "-",
            UnOp::Sqr => "sqr",
            UnOp::Sqrt => "sqrt",
            UnOp::Exp => "exp",
            UnOp::Ln => "ln",
            UnOp::Abs => "abs",
        }
    }
}

/// A piecewise guard `expr rel 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Guard {
    pub expr: Expr,
    pub rel: Relation,
}

/// Three-valued truth of a relation over an interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Truth {
    True,
    False,
    Unknown,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    /// A constant, kept as a tight enclosure of its exact value.
    Const(Interval),
    Var(usize),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Unary(UnOp, Box<Expr>),
    /// `base ^ r` for a fixed real exponent.
    Pow(Box<Expr>, f64),
    /// First matching guard selects its branch; `otherwise` when none holds.
    Piecewise(Vec<(Guard, Expr)>, Box<Expr>),
}

impl Expr {
    pub fn constant(v: f64) -> Expr {
        Expr::Const(Interval::point(v))
    }

    pub fn as_const(&self) -> Option<Interval> {
        match self {
            Expr::Const(c) => Some(*c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Const(c) if *c == Interval::ZERO)
    }

    /// Binary node, folded when both operands are constants.
    pub fn binary(op: BinOp, a: Expr, b: Expr) -> Expr {
        if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
            return Expr::Const(apply_bin(op, x, y));
        }
        Expr::Binary(op, Box::new(a), Box::new(b))
    }

    pub fn unary(op: UnOp, a: Expr) -> Expr {
        if let Some(x) = a.as_const() {
            return Expr::Const(apply_un(op, x));
        }
        Expr::Unary(op, Box::new(a))
    }

    /// Power node. Exponents 2 and 0.5 become `Sqr` and `Sqrt`.
    pub fn pow(base: Expr, r: f64) -> Expr {
        if r == 2.0 {
            return Expr::unary(UnOp::Sqr, base);
        }
        if r == 0.5 {
            return Expr::unary(UnOp::Sqrt, base);
        }
        if r == 1.0 {
            return base;
        }
        if let Some(x) = base.as_const() {
            return Expr::Const(x.pow_r(r));
        }
        Expr::Pow(Box::new(base), r)
    }

    /// Interval evaluation over a box.
    pub fn eval(&self, b: &[Interval]) -> Interval {
        match self {
            Expr::Const(c) => *c,
            Expr::Var(i) => b[*i],
            Expr::Binary(op, x, y) => apply_bin(*op, x.eval(b), y.eval(b)),
            Expr::Unary(op, x) => apply_un(*op, x.eval(b)),
            Expr::Pow(x, r) => x.eval(b).pow_r(*r),
            Expr::Piecewise(arms, otherwise) => {
                let mut acc = Interval::EMPTY;
                for (g, e) in arms {
                    match g.rel.truth(g.expr.eval(b)) {
                        Truth::False => {}
                        Truth::Unknown => acc = acc.hull(&e.eval(b)),
                        Truth::True => return acc.hull(&e.eval(b)),
                    }
                }
                acc.hull(&otherwise.eval(b))
            }
        }
    }

    /// Scalar evaluation at a point in ordinary floating point.
    /// Constants evaluate to the midpoint of their enclosure.
    pub fn eval_point(&self, p: &[f64]) -> f64 {
        match self {
            Expr::Const(c) => c.midpoint(),
            Expr::Var(i) => p[*i],
            Expr::Binary(op, x, y) => {
                let (a, b) = (x.eval_point(p), y.eval_point(p));
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a / b,
                    BinOp::Min => a.min(b),
                    BinOp::Max => a.max(b),
                }
            }
            Expr::Unary(op, x) => {
                let a = x.eval_point(p);
                match op {
                    UnOp::Neg => -a,
                    UnOp::Sqr => a * a,
                    UnOp::Sqrt => a.sqrt(),
                    UnOp::Exp => a.exp(),
                    UnOp::Ln => {
                        if a > 0.0 {
                            a.ln()
                        } else {
                            f64::NAN
                        }
                    }
                    UnOp::Abs => a.abs(),
                }
            }
            Expr::Pow(x, r) => {
                let a = x.eval_point(p);
                if r.fract() == 0.0 && r.abs() <= 1024.0 {
                    a.powi(*r as i32)
                } else if a < 0.0 || (a == 0.0 && *r < 0.0) {
                    f64::NAN
                } else {
                    a.powf(*r)
                }
            }
            Expr::Piecewise(arms, otherwise) => {
                for (g, e) in arms {
                    if g.rel.holds(g.expr.eval_point(p), 0.0) {
                        return e.eval_point(p);
                    }
                }
                otherwise.eval_point(p)
            }
        }
    }

    /// Marks every variable index occurring in the expression.
    pub fn collect_vars(&self, out: &mut Vec<usize>) {
        match self {
            Expr::Const(_) => {}
            Expr::Var(i) => {
                if !out.contains(i) {
                    out.push(*i);
                }
            }
            Expr::Binary(_, x, y) => {
                x.collect_vars(out);
                y.collect_vars(out);
            }
            Expr::Unary(_, x) | Expr::Pow(x, _) => x.collect_vars(out),
            Expr::Piecewise(arms, otherwise) => {
                for (g, e) in arms {
                    g.expr.collect_vars(out);
                    e.collect_vars(out);
                }
                otherwise.collect_vars(out);
            }
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var(_) => 1,
            Expr::Binary(_, x, y) => 1 + x.size() + y.size(),
            Expr::Unary(_, x) | Expr::Pow(x, _) => 1 + x.size(),
            Expr::Piecewise(arms, o) => {
                1 + o.size() + arms.iter().map(|(g, e)| g.expr.size() + e.size()).sum::<usize>()
            }
        }
    }
}

pub(crate) fn apply_bin(op: BinOp, x: Interval, y: Interval) -> Interval {
    match op {
        BinOp::Add => x.add(y),
        BinOp::Sub => x.sub(y),
        BinOp::Mul => x.mul(y),
        BinOp::Div => x.div(y),
        BinOp::Min => x.min(y),
        BinOp::Max => x.max(y),
    }
}

pub(crate) fn apply_un(op: UnOp, x: Interval) -> Interval {
    match op {
        UnOp::Neg => x.neg(),
        UnOp::Sqr => x.sqr(),
        UnOp::Sqrt => x.sqrt(),
        UnOp::Exp => x.exp(),
        UnOp::Ln => x.ln(),
        UnOp::Abs => x.abs(),
    }
}
