//! Flattened expression form used by the contractors.

use crate::interval::Interval;

use super::expr::{BinOp, Expr, UnOp};
use super::Relation;

#[derive(Clone, Debug)]
pub(crate) enum Node {
    Const(Interval),
    Var(usize),
    Bin(BinOp, u32, u32),
    Un(UnOp, u32),
    Pow(u32, f64),
    Piecewise { arms: Vec<(u32, Relation, u32)>, otherwise: u32 },
}

/// Post-order node list; children always precede their parent and the root
/// is the last node.
#[derive(Clone, Debug)]
pub struct Tape {
    pub(crate) nodes: Vec<Node>,
    /// Nodes below a piecewise node: evaluated forward only.
    pub(crate) frozen: Vec<bool>,
}

impl Tape {
    pub fn compile(e: &Expr) -> Tape {
        let mut t = Tape { nodes: Vec::with_capacity(e.size()), frozen: Vec::with_capacity(e.size()) };
        t.push_expr(e, false);
        t
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn push(&mut self, n: Node, frozen: bool) -> u32 {
        self.nodes.push(n);
        self.frozen.push(frozen);
        (self.nodes.len() - 1) as u32
    }

    fn push_expr(&mut self, e: &Expr, frozen: bool) -> u32 {
        match e {
            Expr::Const(c) => self.push(Node::Const(*c), frozen),
            Expr::Var(i) => self.push(Node::Var(*i), frozen),
            Expr::Binary(op, a, b) => {
                let a = self.push_expr(a, frozen);
                let b = self.push_expr(b, frozen);
                self.push(Node::Bin(*op, a, b), frozen)
            }
            Expr::Unary(op, a) => {
                let a = self.push_expr(a, frozen);
                self.push(Node::Un(*op, a), frozen)
            }
            Expr::Pow(a, r) => {
                let a = self.push_expr(a, frozen);
                self.push(Node::Pow(a, *r), frozen)
            }
            Expr::Piecewise(arms, otherwise) => {
                let arms = arms
                    .iter()
                    .map(|(g, body)| {
                        let gi = self.push_expr(&g.expr, true);
                        let bi = self.push_expr(body, true);
                        (gi, g.rel, bi)
                    })
                    .collect();
                let otherwise = self.push_expr(otherwise, true);
                self.push(Node::Piecewise { arms, otherwise }, frozen)
            }
        }
    }
}
