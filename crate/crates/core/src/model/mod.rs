//! Problem model: variables, expressions, constraints and the text format.

pub mod bench;
pub mod expr;
pub mod parse;
pub mod print;
pub mod tape;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::interval::{Interval, IntervalBox};

pub use expr::{BinOp, Expr, Guard, Truth, UnOp};
pub use parse::{parse_problem, ParseError};
pub use print::{print_expr, print_problem};
pub use tape::Tape;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ModelError {
    #[error("negation of a disjunction is not supported (constraint {0})")]
    UnsupportedNegation(usize),
    #[error("variable `{0}` has an empty or unbounded domain")]
    BadDomain(String),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("at most {max} constraints are supported, got {got}", max = ConstraintSet::CAPACITY)]
    TooManyConstraints { got: usize },
    #[error("constraint {0} has no atoms")]
    EmptyConstraint(usize),
}

/// Relation between an expression and zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Lt,
    Ge,
    Gt,
    Eq,
    Ne,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Lt => "<",
            Relation::Ge => ">=",
            Relation::Gt => ">",
            Relation::Eq => "=",
            Relation::Ne => "!=",
        }
    }

    /// The relation obtained by swapping the two sides.
    pub fn flip(self) -> Relation {
        match self {
            Relation::Le => Relation::Ge,
            Relation::Lt => Relation::Gt,
            Relation::Ge => Relation::Le,
            Relation::Gt => Relation::Lt,
            r => r,
        }
    }

    /// Exact logical negation.
    pub fn negate(self) -> Relation {
        match self {
            Relation::Le => Relation::Gt,
            Relation::Lt => Relation::Ge,
            Relation::Ge => Relation::Lt,
            Relation::Gt => Relation::Le,
            Relation::Eq => Relation::Ne,
            Relation::Ne => Relation::Eq,
        }
    }

    /// Closed set of values `v` with `v rel 0`. Strict relations are closed,
    /// `!=` admits everything.
    pub fn admissible(self) -> Interval {
        match self {
            Relation::Le | Relation::Lt => Interval::new(f64::NEG_INFINITY, 0.0),
            Relation::Ge | Relation::Gt => Interval::NONNEG,
            Relation::Eq => Interval::ZERO,
            Relation::Ne => Interval::ENTIRE,
        }
    }

    /// Whether `v rel 0` holds, allowing `slack` in favour of the relation.
    pub fn holds(self, v: f64, slack: f64) -> bool {
        if v.is_nan() {
            return false;
        }
        match self {
            Relation::Le => v <= slack,
            Relation::Lt => v < 0.0 || v <= slack && slack > 0.0,
            Relation::Ge => v >= -slack,
            Relation::Gt => v > 0.0 || v >= -slack && slack > 0.0,
            Relation::Eq => v.abs() <= slack,
            Relation::Ne => v != 0.0 || slack > 0.0,
        }
    }

    /// Truth of `v rel 0` for every `v` in `g`.
    pub fn truth(self, g: Interval) -> Truth {
        if g.is_empty() {
            return Truth::False;
        }
        let (lo, hi) = (g.lo(), g.hi());
        let (t, f) = match self {
            Relation::Le => (hi <= 0.0, lo > 0.0),
            Relation::Lt => (hi < 0.0, lo >= 0.0),
            Relation::Ge => (lo >= 0.0, hi < 0.0),
            Relation::Gt => (lo > 0.0, hi <= 0.0),
            Relation::Eq => (lo == 0.0 && hi == 0.0, lo > 0.0 || hi < 0.0),
            Relation::Ne => (lo > 0.0 || hi < 0.0, lo == 0.0 && hi == 0.0),
        };
        if t {
            Truth::True
        } else if f {
            Truth::False
        } else {
            Truth::Unknown
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// An atomic constraint `expr rel 0` with its compiled tape.
#[derive(Clone, Debug)]
pub struct Atom {
    expr: Expr,
    rel: Relation,
    tape: Tape,
}

impl PartialEq for Atom {
    fn eq(&self, other: &Self) -> bool {
        self.rel == other.rel && self.expr == other.expr
    }
}

impl Atom {
    pub fn new(expr: Expr, rel: Relation) -> Atom {
        let tape = Tape::compile(&expr);
        Atom { expr, rel, tape }
    }

    /// `0 <= 0`, satisfied everywhere.
    pub fn always_true() -> Atom {
        Atom::new(Expr::Const(Interval::ZERO), Relation::Le)
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn rel(&self) -> Relation {
        self.rel
    }

    pub fn tape(&self) -> &Tape {
        &self.tape
    }

    /// Point test with slack `slack_rel * max(1, |f(p)|)`.
    pub fn holds_at(&self, p: &[f64], slack_rel: f64) -> bool {
        let v = self.expr.eval_point(p);
        self.rel.holds(v, slack_rel * v.abs().max(1.0))
    }

    /// Negation for a single comparison.
    pub fn negate(&self) -> Atom {
        Atom::new(self.expr.clone(), self.rel.negate())
    }

    /// Closed relaxation of the negation: strict bounds become non-strict,
    /// `=` becomes always-true and `!=` becomes `=`.
    pub fn relax_negation(&self) -> Atom {
        let rel = match self.rel {
            Relation::Le | Relation::Lt => Relation::Ge,
            Relation::Ge | Relation::Gt => Relation::Le,
            Relation::Ne => Relation::Eq,
            Relation::Eq => return Atom::always_true(),
        };
        Atom::new(self.expr.clone(), rel)
    }
}

/// A constraint: a single comparison or a disjunction of comparisons.
#[derive(Clone, Debug)]
pub struct Constraint {
    id: usize,
    atoms: Vec<Atom>,
    vars: Vec<usize>,
    relaxed_negation: Vec<Atom>,
}

impl PartialEq for Constraint {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id && self.atoms == other.atoms
    }
}

impl Constraint {
    /// Builds a constraint from one or more disjuncts.
    pub fn new(id: usize, atoms: Vec<Atom>) -> Result<Constraint, ModelError> {
        if atoms.is_empty() {
            return Err(ModelError::EmptyConstraint(id));
        }
        let mut vars = Vec::new();
        for a in &atoms {
            a.expr.collect_vars(&mut vars);
        }
        vars.sort_unstable();
        let relaxed_negation = atoms.iter().map(Atom::relax_negation).collect();
        Ok(Constraint { id, atoms, vars, relaxed_negation })
    }

    pub fn atomic(id: usize, expr: Expr, rel: Relation) -> Constraint {
        Constraint::new(id, vec![Atom::new(expr, rel)]).expect("one atom")
    }

    pub fn id(&self) -> usize {
        self.id
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_disjunction(&self) -> bool {
        self.atoms.len() > 1
    }

    pub fn is_equality(&self) -> bool {
        self.atoms.len() == 1 && self.atoms[0].rel == Relation::Eq
    }

    /// Sorted indices of the variables occurring in the constraint.
    pub fn vars(&self) -> &[usize] {
        &self.vars
    }

    pub fn holds_at(&self, p: &[f64], slack_rel: f64) -> bool {
        self.atoms.iter().any(|a| a.holds_at(p, slack_rel))
    }

    /// Exact negation of an atomic constraint.
    pub fn negate(&self) -> Result<Constraint, ModelError> {
        if self.is_disjunction() {
            return Err(ModelError::UnsupportedNegation(self.id));
        }
        Constraint::new(self.id, vec![self.atoms[0].negate()])
    }

    /// Closed relaxation of the negation, as a conjunction of atoms. For a
    /// disjunction this is the conjunction of the relaxed negated disjuncts.
    pub fn relaxed_negation(&self) -> &[Atom] {
        &self.relaxed_negation
    }

    fn reindexed(mut self, id: usize) -> Constraint {
        self.id = id;
        self
    }
}

/// A set of constraint ids, stored as a bit mask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConstraintSet(u64);

impl ConstraintSet {
    pub const CAPACITY: usize = 64;

    pub fn empty() -> ConstraintSet {
        ConstraintSet(0)
    }

    /// `{0, .., n-1}`.
    pub fn first(n: usize) -> ConstraintSet {
        assert!(n <= Self::CAPACITY);
        if n == 64 {
            ConstraintSet(u64::MAX)
        } else {
            ConstraintSet((1u64 << n) - 1)
        }
    }

    pub fn contains(self, id: usize) -> bool {
        id < 64 && self.0 >> id & 1 == 1
    }

    pub fn insert(&mut self, id: usize) {
        self.0 |= 1 << id;
    }

    pub fn remove(&mut self, id: usize) {
        self.0 &= !(1u64 << id);
    }

    pub fn without(mut self, id: usize) -> ConstraintSet {
        self.remove(id);
        self
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, other: ConstraintSet) -> ConstraintSet {
        ConstraintSet(self.0 | other.0)
    }

    /// Ids in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(i)
        })
    }
}

impl FromIterator<usize> for ConstraintSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let mut s = ConstraintSet::empty();
        for i in iter {
            s.insert(i);
        }
        s
    }
}

impl fmt::Debug for ConstraintSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for ConstraintSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for ConstraintSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let ids = Vec::<usize>::deserialize(d)?;
        if let Some(&bad) = ids.iter().find(|&&i| i >= ConstraintSet::CAPACITY) {
            return Err(serde::de::Error::custom(format!("constraint id {bad} out of range")));
        }
        Ok(ids.into_iter().collect())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Variable {
    pub name: String,
    pub domain: Interval,
}

/// A numerical constraint satisfaction problem.
#[derive(Clone, Debug, PartialEq)]
pub struct Ncsp {
    name: String,
    vars: Vec<Variable>,
    constraints: Vec<Constraint>,
}

impl Ncsp {
    /// Validates domains and renumbers constraints by position.
    pub fn new(name: impl Into<String>, vars: Vec<Variable>, constraints: Vec<Constraint>) -> Result<Ncsp, ModelError> {
        for (i, v) in vars.iter().enumerate() {
            let d = v.domain;
            if d.is_empty() || !d.lo().is_finite() || !d.hi().is_finite() {
                return Err(ModelError::BadDomain(v.name.clone()));
            }
            if vars[..i].iter().any(|w| w.name == v.name) {
                return Err(ModelError::DuplicateVariable(v.name.clone()));
            }
        }
        if constraints.len() > ConstraintSet::CAPACITY {
            return Err(ModelError::TooManyConstraints { got: constraints.len() });
        }
        let constraints = constraints.into_iter().enumerate().map(|(i, c)| c.reindexed(i)).collect();
        Ok(Ncsp { name: name.into(), vars, constraints })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn var_names(&self) -> Vec<&str> {
        self.vars.iter().map(|v| v.name.as_str()).collect()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn constraint(&self, id: usize) -> &Constraint {
        &self.constraints[id]
    }

    pub fn all_constraints(&self) -> ConstraintSet {
        ConstraintSet::first(self.constraints.len())
    }

    pub fn domain(&self) -> IntervalBox {
        self.vars.iter().map(|v| v.domain).collect()
    }

    /// Point membership in the solution set, with relative slack.
    pub fn satisfies(&self, p: &[f64], slack_rel: f64) -> bool {
        self.constraints.iter().all(|c| c.holds_at(p, slack_rel))
    }
}
