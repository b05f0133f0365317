//! Noncommutative rational formulas: AST, grammar, measures, evaluation over
//! matrix algebras and a small corpus.

mod corpus;
mod eval;
mod parse;
mod random;

use std::fmt;
use std::sync::Arc;

use crate::field::Rat;

pub use corpus::{corpus, CorpusEntry, Expected};
pub use eval::{eval, eval_rat, EvalResult};
pub use parse::parse;
pub use random::random_formula;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormulaError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("bad variable at {pos}: index must be a positive integer")]
    BadVar { pos: usize },
    #[error("point has {got} matrices, formula needs {need}")]
    Arity { need: usize, got: usize },
    #[error("point matrices must all be {0}x{0}")]
    Dim(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    /// 1-based variable index.
    Var(usize),
    Const(Rat),
    Add(Formula, Formula),
    Mul(Formula, Formula),
    Inv(Formula),
}

/// Immutable formula tree with cached measures.
#[derive(Clone, PartialEq)]
pub struct Formula(Arc<Inner>);

#[derive(Debug, PartialEq)]
struct Inner {
    node: Node,
    size: usize,
    height: usize,
    nvars: usize,
}

impl Formula {
    fn build(node: Node) -> Formula {
        let (size, height, nvars) = match &node {
            Node::Var(i) => (1, 0, *i),
            Node::Const(_) => (1, 0, 0),
            Node::Add(a, b) | Node::Mul(a, b) => {
                (1 + a.size() + b.size(), a.height().max(b.height()), a.nvars().max(b.nvars()))
            }
            Node::Inv(a) => (1 + a.size(), 1 + a.height(), a.nvars()),
        };
        Formula(Arc::new(Inner { node, size, height, nvars }))
    }

    pub fn var(i: usize) -> Formula {
        assert!(i >= 1, "variables are 1-based");
        Formula::build(Node::Var(i))
    }
    pub fn constant(c: Rat) -> Formula {
        Formula::build(Node::Const(c))
    }
    pub fn int(v: i64) -> Formula {
        Formula::constant(Rat::int(v))
    }
    pub fn add(a: Formula, b: Formula) -> Formula {
        Formula::build(Node::Add(a, b))
    }
    pub fn mul(a: Formula, b: Formula) -> Formula {
        Formula::build(Node::Mul(a, b))
    }
    pub fn inv(a: Formula) -> Formula {
        Formula::build(Node::Inv(a))
    }
    /// a − b as a + (−1)·b.
    pub fn sub(a: Formula, b: Formula) -> Formula {
        Formula::add(a, Formula::mul(Formula::int(-1), b))
    }

    pub fn node(&self) -> &Node {
        &self.0.node
    }
    /// Number of nodes, leaves included.
    pub fn size(&self) -> usize {
        self.0.size
    }
    /// Maximum number of inverse gates on a root-to-leaf path.
    pub fn height(&self) -> usize {
        self.0.height
    }
    /// Largest variable index (0 for constant formulas).
    pub fn nvars(&self) -> usize {
        self.0.nvars
    }
    pub fn measures(&self) -> (usize, usize, usize) {
        (self.size(), self.height(), self.nvars())
    }

    /// Maximal subformulas of the form inv(g) not below another inverse, in
    /// left-to-right order, with their paths.
    pub fn top_inverses(&self) -> Vec<(String, Formula)> {
        fn go(f: &Formula, path: &mut Vec<String>, out: &mut Vec<(String, Formula)>) {
            match f.node() {
                Node::Var(_) | Node::Const(_) => {}
                Node::Add(a, b) | Node::Mul(a, b) => {
                    let tag = if matches!(f.node(), Node::Add(..)) { "add" } else { "mul" };
                    for (k, c) in [a, b].into_iter().enumerate() {
                        path.push(format!("{tag}.{k}"));
                        go(c, path, out);
                        path.pop();
                    }
                }
                Node::Inv(_) => {
                    let mut p = path.clone();
                    p.push("inv".into());
                    out.push((p.join("/"), f.clone()));
                }
            }
        }
        let mut out = vec![];
        go(self, &mut vec![], &mut out);
        out
    }
}

fn is_neg_one(f: &Formula) -> bool {
    matches!(f.node(), Node::Const(c) if *c == Rat::int(-1))
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            Node::Var(i) => write!(f, "x{i}"),
            Node::Const(c) => write!(f, "{c}"),
            Node::Inv(a) => write!(f, "inv({a})"),
            Node::Add(a, b) => {
                if let Node::Mul(m, r) = b.node() {
                    if is_neg_one(m) {
                        return match r.node() {
                            Node::Add(..) => write!(f, "{a} - ({r})"),
                            _ => write!(f, "{a} - {r}"),
                        };
                    }
                }
                match b.node() {
                    Node::Add(..) => write!(f, "{a} + ({b})"),
                    _ => write!(f, "{a} + {b}"),
                }
            }
            Node::Mul(a, b) => {
                match a.node() {
                    Node::Add(..) => write!(f, "({a})")?,
                    _ => write!(f, "{a}")?,
                }
                match b.node() {
                    Node::Add(..) | Node::Mul(..) => write!(f, "*({b})"),
                    _ => write!(f, "*{b}"),
                }
            }
        }
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Formula({self})")
    }
}

impl std::str::FromStr for Formula {
    type Err = FormulaError;
    fn from_str(s: &str) -> Result<Formula, FormulaError> {
        parse(s)
    }
}

impl serde::Serialize for Formula {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
