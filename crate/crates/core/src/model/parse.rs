//! Reader for the problem text format.
//!
//! ```text
//! problem circle
//! var x in [-2, 2]
//! var y in [-2, 2]
//! let r2 = x^2 + y^2
//! constraint 1 <= r2 <= 4
//! constraint x >= 0 or y >= 0
//! ```
//!
//! Statements end at a newline or a top-level `;`. Numeric literals that are
//! not exactly representable become one-ulp-wide enclosures; bounds written
//! inside `[a, b]` are taken as the nearest doubles.

use std::collections::HashMap;
use std::fmt;

use crate::interval::Interval;

use super::expr::{BinOp, Expr, Guard, UnOp};
use super::{Atom, Constraint, Ncsp, Relation, Variable};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.col, self.message)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Arrow,
    Rel(Relation),
    Assign,
    Newline,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(s) | Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBracket => f.write_str("`[`"),
            Tok::RBracket => f.write_str("`]`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Caret => f.write_str("`^`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::Rel(r) => write!(f, "`{r}`"),
            Tok::Assign => f.write_str("`=`"),
            Tok::Newline => f.write_str("end of line"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let mut depth = 0i32;
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let err = |m: String| ParseError { line: tl, col: tc, message: m };
        if c == '\n' {
            if depth == 0 {
                out.push(Token { tok: Tok::Newline, line, col });
            }
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(char::is_ascii_digit)) {
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let s: String = chars[start..i].iter().collect();
            if s.matches('.').count() > 1 || s.parse::<f64>().is_err() {
                return Err(err(format!("malformed number `{s}`")));
            }
            Tok::Num(s)
        } else if c.is_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else {
            let next = chars.get(i + 1).copied();
            let (t, n) = match (c, next) {
                ('<', Some('=')) => (Tok::Rel(Relation::Le), 2),
                ('>', Some('=')) => (Tok::Rel(Relation::Ge), 2),
                ('!', Some('=')) => (Tok::Rel(Relation::Ne), 2),
                ('=', Some('=')) => (Tok::Rel(Relation::Eq), 2),
                ('-', Some('>')) => (Tok::Arrow, 2),
                ('<', _) => (Tok::Rel(Relation::Lt), 1),
                ('>', _) => (Tok::Rel(Relation::Gt), 1),
                ('=', _) => (Tok::Assign, 1),
                ('(', _) => (Tok::LParen, 1),
                (')', _) => (Tok::RParen, 1),
                ('[', _) => (Tok::LBracket, 1),
                (']', _) => (Tok::RBracket, 1),
                (',', _) => (Tok::Comma, 1),
                (';', _) => (Tok::Semi, 1),
                ('+', _) => (Tok::Plus, 1),
                ('-', _) => (Tok::Minus, 1),
                ('*', _) => (Tok::Star, 1),
                ('/', _) => (Tok::Slash, 1),
                ('^', _) => (Tok::Caret, 1),
                _ => return Err(err(format!("unexpected character `{c}`"))),
            };
            match t {
                Tok::LParen | Tok::LBracket => depth += 1,
                Tok::RParen | Tok::RBracket => depth -= 1,
                _ => {}
            }
            i += n;
            t
        };
        col += i - start;
        out.push(Token { tok, line: tl, col: tc });
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

/// True when the decimal literal denotes a double exactly.
pub(crate) fn decimal_is_exact(s: &str) -> bool {
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(k) => match s[k + 1..].parse::<i32>() {
            Ok(e) => (&s[..k], e),
            Err(_) => return false,
        },
        None => (s, 0),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    let digits: String = format!("{int}{frac}");
    let mut exp10 = exp - frac.len() as i32;
    let digits = digits.trim_start_matches('0');
    if digits.is_empty() {
        return true;
    }
    let trimmed = digits.trim_end_matches('0');
    exp10 += (digits.len() - trimmed.len()) as i32;
    if trimmed.len() > 38 {
        return false;
    }
    let Ok(mut m) = trimmed.parse::<u128>() else {
        return false;
    };
    if exp10 >= 0 {
        if exp10 > 308 {
            return false;
        }
        for _ in 0..exp10 {
            match m.checked_mul(5) {
                Some(v) => m = v,
                None => return false,
            }
        }
    } else {
        for _ in 0..-exp10 {
            if m % 5 != 0 {
                return false;
            }
            m /= 5;
        }
    }
    m >>= m.trailing_zeros();
    let v: f64 = match s.parse() {
        Ok(v) => v,
        Err(_) => return false,
    };
    m < (1u128 << 53) && v.is_finite() && (v == 0.0 || v.abs() >= f64::MIN_POSITIVE)
}

/// Enclosure of the real number written as `s`.
pub(crate) fn literal(s: &str) -> Interval {
    let v: f64 = s.parse().expect("lexer accepted a valid number");
    if decimal_is_exact(s) {
        Interval::point(v)
    } else {
        Interval::new(v.next_down(), v.next_up())
    }
}

/// Enclosure of pi.
pub fn pi() -> Interval {
    // The double closest to pi lies just below it.
    Interval::new(std::f64::consts::PI, std::f64::consts::PI.next_up())
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    vars: Vec<Variable>,
    lets: HashMap<String, Expr>,
}

type PResult<T> = Result<T, ParseError>;

const FUNCTIONS: &[&str] = &["sqrt", "ln", "exp", "abs", "min", "max", "piecewise"];
const KEYWORDS: &[&str] = &["problem", "var", "let", "constraint", "in", "or", "else", "pi"];

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: impl Into<String>) -> ParseError {
        let t = &self.toks[self.pos];
        ParseError { line: t.line, col: t.col, message: message.into() }
    }

    fn expect(&mut self, want: Tok) -> PResult<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.error_here(format!("expected {want}, found {}", self.peek())))
        }
    }

    fn is_ident(&self, word: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == word)
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            t => Err(self.error_here(format!("expected identifier, found {t}"))),
        }
    }

    /// Optional minus followed by a number, read as the nearest double.
    fn signed_number(&mut self) -> PResult<f64> {
        let neg = *self.peek() == Tok::Minus;
        if neg {
            self.bump();
        }
        match self.peek().clone() {
            Tok::Num(s) => {
                self.bump();
                let v: f64 = s.parse().expect("valid number");
                Ok(if neg { -v } else { v })
            }
            t => Err(self.error_here(format!("expected number, found {t}"))),
        }
    }

    fn end_statement(&mut self) -> PResult<()> {
        match self.peek() {
            Tok::Newline | Tok::Semi => {
                self.bump();
                Ok(())
            }
            Tok::Eof => Ok(()),
            t => Err(self.error_here(format!("expected end of statement, found {t}"))),
        }
    }

    fn check_fresh_name(&self, name: &str) -> PResult<()> {
        if FUNCTIONS.contains(&name) || KEYWORDS.contains(&name) {
            return Err(self.error_here(format!("`{name}` is reserved")));
        }
        if self.vars.iter().any(|v| v.name == name) || self.lets.contains_key(name) {
            return Err(self.error_here(format!("`{name}` is already defined")));
        }
        Ok(())
    }

    fn problem(mut self) -> PResult<Ncsp> {
        let mut name = String::from("unnamed");
        let mut constraints: Vec<Constraint> = Vec::new();
        loop {
            match self.peek().clone() {
                Tok::Newline | Tok::Semi => {
                    self.bump();
                    continue;
                }
                Tok::Eof => break,
                Tok::Ident(kw) => {
                    let at = self.pos;
                    self.bump();
                    match kw.as_str() {
                        "problem" => name = self.ident()?,
                        "var" => {
                            let at_name = self.pos;
                            let v = self.ident()?;
                            self.pos = at_name;
                            self.check_fresh_name(&v)?;
                            self.bump();
                            if !self.is_ident("in") {
                                return Err(self.error_here("expected `in`"));
                            }
                            self.bump();
                            self.expect(Tok::LBracket)?;
                            let lo = self.signed_number()?;
                            self.expect(Tok::Comma)?;
                            let hi = self.signed_number()?;
                            self.expect(Tok::RBracket)?;
                            let d = Interval::new(lo, hi);
                            if d.is_empty() || !lo.is_finite() || !hi.is_finite() {
                                self.pos = at_name;
                                return Err(self.error_here(format!("empty or unbounded domain for `{v}`")));
                            }
                            self.vars.push(Variable { name: v, domain: d });
                        }
                        "let" => {
                            let at_name = self.pos;
                            let id = self.ident()?;
                            self.pos = at_name;
                            self.check_fresh_name(&id)?;
                            self.bump();
                            self.expect(Tok::Assign)?;
                            let e = self.expr()?;
                            self.lets.insert(id, e);
                        }
                        "constraint" => {
                            for atoms in self.constraint()? {
                                let id = constraints.len();
                                constraints.push(Constraint::new(id, atoms).expect("non-empty"));
                            }
                        }
                        _ => {
                            self.pos = at;
                            return Err(self.error_here(format!("unknown statement `{kw}`")));
                        }
                    }
                    self.end_statement()?;
                }
                t => return Err(self.error_here(format!("expected a statement, found {t}"))),
            }
        }
        let last = self.toks.len() - 1;
        Ncsp::new(name, self.vars, constraints).map_err(|e| ParseError {
            line: self.toks[last].line,
            col: self.toks[last].col,
            message: e.to_string(),
        })
    }

    /// One `constraint` statement; chains expand into several constraints.
    fn constraint(&mut self) -> PResult<Vec<Vec<Atom>>> {
        let first_at = self.pos;
        let (exprs, rels) = self.chain()?;
        if self.is_ident("or") {
            if rels.len() != 1 {
                self.pos = first_at;
                return Err(self.error_here("a chained comparison cannot be part of a disjunction"));
            }
            let mut atoms = vec![make_atom(&exprs[0], rels[0], &exprs[1])];
            while self.is_ident("or") {
                self.bump();
                let at = self.pos;
                let (e, r) = self.chain()?;
                if r.len() != 1 {
                    self.pos = at;
                    return Err(self.error_here("a chained comparison cannot be part of a disjunction"));
                }
                atoms.push(make_atom(&e[0], r[0], &e[1]));
            }
            return Ok(vec![atoms]);
        }
        Ok(rels.iter().enumerate().map(|(i, &r)| vec![make_atom(&exprs[i], r, &exprs[i + 1])]).collect())
    }

    fn relation(&mut self) -> Option<Relation> {
        match *self.peek() {
            Tok::Rel(r) => {
                self.bump();
                Some(r)
            }
            Tok::Assign => {
                self.bump();
                Some(Relation::Eq)
            }
            _ => None,
        }
    }

    fn chain(&mut self) -> PResult<(Vec<Expr>, Vec<Relation>)> {
        let mut exprs = vec![self.expr()?];
        let mut rels = Vec::new();
        while let Some(r) = self.relation() {
            rels.push(r);
            exprs.push(self.expr()?);
        }
        if rels.is_empty() {
            return Err(self.error_here(format!("expected a comparison operator, found {}", self.peek())));
        }
        Ok((exprs, rels))
    }

    fn expr(&mut self) -> PResult<Expr> {
        let mut e = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(e),
            };
            self.bump();
            let r = self.term()?;
            e = Expr::binary(op, e, r);
        }
    }

    fn term(&mut self) -> PResult<Expr> {
        let mut e = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(e),
            };
            self.bump();
            let r = self.unary()?;
            e = Expr::binary(op, e, r);
        }
    }

    fn unary(&mut self) -> PResult<Expr> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(Expr::unary(UnOp::Neg, self.unary()?))
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> PResult<Expr> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let at = self.pos;
        if let Some(r) = self.literal_exponent() {
            return Ok(Expr::pow(base, r));
        }
        let ex = self.exponent()?;
        let Some(e) = ex.as_const() else {
            self.pos = at;
            return Err(self.error_here("exponent must be a constant"));
        };
        if e.is_empty() {
            self.pos = at;
            return Err(self.error_here("exponent is undefined"));
        }
        if let Some(b) = base.as_const() {
            if !e.is_degenerate() && b.lo() > 0.0 {
                return Ok(Expr::Const(e.mul(b.ln()).exp()));
            }
        }
        Ok(Expr::pow(base, e.midpoint()))
    }

    /// `n`, `-n`, `(n)` or `(-n)` after `^`, read as the nearest double.
    fn literal_exponent(&mut self) -> Option<f64> {
        let start = self.pos;
        let paren = *self.peek() == Tok::LParen;
        let mut k = usize::from(paren);
        let neg = *self.peek_at(k) == Tok::Minus;
        k += usize::from(neg);
        let Tok::Num(s) = self.peek_at(k).clone() else {
            return None;
        };
        k += 1;
        if paren {
            if *self.peek_at(k) != Tok::RParen {
                return None;
            }
            k += 1;
        } else if *self.peek_at(k) == Tok::Caret {
            return None;
        }
        self.pos = start + k;
        let v: f64 = s.parse().ok()?;
        Some(if neg { -v } else { v })
    }

    /// Right operand of `^`: binds tighter than unary minus on the left, but
    /// may itself carry a sign.
    fn exponent(&mut self) -> PResult<Expr> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expr::unary(UnOp::Neg, self.exponent()?));
        }
        self.power()
    }

    fn args(&mut self, n: usize, fname: &str) -> PResult<Vec<Expr>> {
        self.expect(Tok::LParen)?;
        let mut out = vec![self.expr()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            out.push(self.expr()?);
        }
        if out.len() != n {
            return Err(self.error_here(format!("`{fname}` takes {n} argument(s), got {}", out.len())));
        }
        self.expect(Tok::RParen)?;
        Ok(out)
    }

    fn atom(&mut self) -> PResult<Expr> {
        let t = self.peek().clone();
        match t {
            Tok::Num(s) => {
                self.bump();
                Ok(Expr::Const(literal(&s)))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::LBracket => {
                let at = self.pos;
                self.bump();
                let lo = self.signed_number()?;
                self.expect(Tok::Comma)?;
                let hi = self.signed_number()?;
                self.expect(Tok::RBracket)?;
                let c = Interval::new(lo, hi);
                if c.is_empty() {
                    self.pos = at;
                    return Err(self.error_here("empty interval constant"));
                }
                Ok(Expr::Const(c))
            }
            Tok::Ident(name) => {
                let at = self.pos;
                self.bump();
                let unary = |op| move |a: Vec<Expr>| Expr::unary(op, a.into_iter().next().unwrap());
                let binary = |op| {
                    move |a: Vec<Expr>| {
                        let mut it = a.into_iter();
                        let x = it.next().unwrap();
                        Expr::binary(op, x, it.next().unwrap())
                    }
                };
                match name.as_str() {
                    "pi" => Ok(Expr::Const(pi())),
                    "sqrt" => self.args(1, &name).map(unary(UnOp::Sqrt)),
                    "ln" => self.args(1, &name).map(unary(UnOp::Ln)),
                    "exp" => self.args(1, &name).map(unary(UnOp::Exp)),
                    "abs" => self.args(1, &name).map(unary(UnOp::Abs)),
                    "min" => self.args(2, &name).map(binary(BinOp::Min)),
                    "max" => self.args(2, &name).map(binary(BinOp::Max)),
                    "piecewise" => self.piecewise(),
                    _ => {
                        if let Some(i) = self.vars.iter().position(|v| v.name == name) {
                            Ok(Expr::Var(i))
                        } else if let Some(e) = self.lets.get(&name) {
                            Ok(e.clone())
                        } else {
                            self.pos = at;
                            Err(self.error_here(format!("unknown identifier `{name}`")))
                        }
                    }
                }
            }
            t => Err(self.error_here(format!("expected an expression, found {t}"))),
        }
    }

    fn piecewise(&mut self) -> PResult<Expr> {
        self.expect(Tok::LParen)?;
        let mut arms = Vec::new();
        loop {
            if self.is_ident("else") {
                self.bump();
                self.expect(Tok::Arrow)?;
                let otherwise = self.expr()?;
                self.expect(Tok::RParen)?;
                return Ok(Expr::Piecewise(arms, Box::new(otherwise)));
            }
            self.expect(Tok::LParen)?;
            let lhs = self.expr()?;
            let Some(rel) = self.relation() else {
                return Err(self.error_here(format!("expected a comparison operator, found {}", self.peek())));
            };
            let rhs = self.expr()?;
            self.expect(Tok::RParen)?;
            self.expect(Tok::Arrow)?;
            let body = self.expr()?;
            let (expr, rel) = normalize(&lhs, rel, &rhs);
            arms.push((Guard { expr, rel }, body));
            if *self.peek() == Tok::RParen {
                return Err(self.error_here("piecewise needs a final `else` branch"));
            }
            self.expect(Tok::Semi)?;
        }
    }
}

/// Rewrites `lhs rel rhs` as `expr rel' 0`.
fn normalize(lhs: &Expr, rel: Relation, rhs: &Expr) -> (Expr, Relation) {
    if rhs.is_zero() {
        return (lhs.clone(), rel);
    }
    if lhs.is_zero() {
        return (rhs.clone(), rel.flip());
    }
    if lhs.as_const().is_some() && rhs.as_const().is_none() {
        return (Expr::binary(BinOp::Sub, rhs.clone(), lhs.clone()), rel.flip());
    }
    (Expr::binary(BinOp::Sub, lhs.clone(), rhs.clone()), rel)
}

fn make_atom(lhs: &Expr, rel: Relation, rhs: &Expr) -> Atom {
    let (e, r) = normalize(lhs, rel, rhs);
    Atom::new(e, r)
}

/// Parses a complete problem.
pub fn parse_problem(src: &str) -> Result<Ncsp, ParseError> {
    let toks = lex(src)?;
    Parser { toks, pos: 0, vars: Vec::new(), lets: HashMap::new() }.problem()
}
