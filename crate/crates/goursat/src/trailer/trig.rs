//! Trigonometric expression DAGs with exact symbolic differentiation and
//! floating-point evaluation.
//!
//! Nodes are reference counted and immutable, so subexpressions are shared
//! freely; derivatives and evaluations memoize on node identity to keep the
//! nested Lie derivatives of the trailer charts tractable.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::symcore::rational::{fmt_rational, q, to_f64, Rational};

#[derive(Debug)]
pub enum Node {
    Const(Rational),
    Var(usize),
    Add(TrigExpr, TrigExpr),
    Mul(TrigExpr, TrigExpr),
    Div(TrigExpr, TrigExpr),
    Neg(TrigExpr),
    Pow(TrigExpr, u32),
    Sin(TrigExpr),
    Cos(TrigExpr),
    Tan(TrigExpr),
    Atan(TrigExpr),
}

#[derive(Debug)]
struct Inner {
    node: Node,
    vars: u128,
}

/// Shared handle to an expression node.
#[derive(Clone, Debug)]
pub struct TrigExpr(Arc<Inner>);

impl PartialEq for TrigExpr {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.to_text_with(&default_name) == other.to_text_with(&default_name)
    }
}

fn default_name(i: usize) -> String {
    format!("v{i}")
}

fn mk(node: Node) -> TrigExpr {
    let vars = match &node {
        Node::Const(_) => 0,
        Node::Var(i) => 1u128 << (*i).min(127),
        Node::Add(a, b) | Node::Mul(a, b) | Node::Div(a, b) => a.0.vars | b.0.vars,
        Node::Neg(a) | Node::Pow(a, _) | Node::Sin(a) | Node::Cos(a) | Node::Tan(a) | Node::Atan(a) => a.0.vars,
    };
    TrigExpr(Arc::new(Inner { node, vars }))
}

impl TrigExpr {
    pub fn node(&self) -> &Node {
        &self.0.node
    }

    pub fn constant(c: Rational) -> Self {
        mk(Node::Const(c))
    }

    pub fn int(c: i64) -> Self {
        Self::constant(q(c))
    }

    pub fn var(i: usize) -> Self {
        assert!(i < 128, "at most 128 variables are supported");
        mk(Node::Var(i))
    }

    pub fn as_const(&self) -> Option<&Rational> {
        match &self.0.node {
            Node::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const().is_some_and(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.as_const().is_some_and(One::is_one)
    }

    pub fn depends_on(&self, i: usize) -> bool {
        self.0.vars & (1u128 << i.min(127)) != 0
    }

    pub fn add(&self, b: &TrigExpr) -> TrigExpr {
        match (self.as_const(), b.as_const()) {
            (Some(x), Some(y)) => Self::constant(x + y),
            (Some(x), _) if x.is_zero() => b.clone(),
            (_, Some(y)) if y.is_zero() => self.clone(),
            _ => mk(Node::Add(self.clone(), b.clone())),
        }
    }

    pub fn sub(&self, b: &TrigExpr) -> TrigExpr {
        self.add(&b.neg())
    }

    pub fn neg(&self) -> TrigExpr {
        match &self.0.node {
            Node::Const(c) => Self::constant(-c.clone()),
            Node::Neg(a) => a.clone(),
            _ => mk(Node::Neg(self.clone())),
        }
    }

    pub fn mul(&self, b: &TrigExpr) -> TrigExpr {
        match (self.as_const(), b.as_const()) {
            (Some(x), Some(y)) => Self::constant(x * y),
            (Some(x), _) if x.is_zero() => Self::int(0),
            (_, Some(y)) if y.is_zero() => Self::int(0),
            (Some(x), _) if x.is_one() => b.clone(),
            (_, Some(y)) if y.is_one() => self.clone(),
            (Some(x), _) if *x == q(-1) => b.neg(),
            (_, Some(y)) if *y == q(-1) => self.neg(),
            _ => mk(Node::Mul(self.clone(), b.clone())),
        }
    }

    /// Panics when dividing by the constant zero.
    pub fn div(&self, b: &TrigExpr) -> TrigExpr {
        match (self.as_const(), b.as_const()) {
            (_, Some(y)) if y.is_zero() => panic!("division by constant zero"),
            (Some(x), Some(y)) => Self::constant(x / y),
            (Some(x), _) if x.is_zero() => Self::int(0),
            (_, Some(y)) if y.is_one() => self.clone(),
            _ => mk(Node::Div(self.clone(), b.clone())),
        }
    }

    pub fn pow(&self, e: u32) -> TrigExpr {
        match (e, self.as_const()) {
            (0, _) => Self::int(1),
            (1, _) => self.clone(),
            (_, Some(c)) => Self::constant(num_traits::pow(c.clone(), e as usize)),
            _ => mk(Node::Pow(self.clone(), e)),
        }
    }

    pub fn sin(&self) -> TrigExpr {
        if self.is_zero() {
            return Self::int(0);
        }
        mk(Node::Sin(self.clone()))
    }

    pub fn cos(&self) -> TrigExpr {
        if self.is_zero() {
            return Self::int(1);
        }
        mk(Node::Cos(self.clone()))
    }

    pub fn tan(&self) -> TrigExpr {
        if self.is_zero() {
            return Self::int(0);
        }
        mk(Node::Tan(self.clone()))
    }

    pub fn atan(&self) -> TrigExpr {
        if self.is_zero() {
            return Self::int(0);
        }
        mk(Node::Atan(self.clone()))
    }

    /// Partial derivative with respect to variable `i`.
    pub fn diff(&self, i: usize) -> TrigExpr {
        let mut memo = HashMap::new();
        self.diff_memo(i, &mut memo)
    }

    fn key(&self) -> *const Inner {
        Arc::as_ptr(&self.0)
    }

    fn diff_memo(&self, i: usize, memo: &mut HashMap<*const Inner, TrigExpr>) -> TrigExpr {
        if !self.depends_on(i) {
            return Self::int(0);
        }
        if let Some(d) = memo.get(&self.key()) {
            return d.clone();
        }
        let d = match &self.0.node {
            Node::Const(_) => Self::int(0),
            Node::Var(j) => Self::int(if *j == i { 1 } else { 0 }),
            Node::Add(a, b) => a.diff_memo(i, memo).add(&b.diff_memo(i, memo)),
            Node::Neg(a) => a.diff_memo(i, memo).neg(),
            Node::Mul(a, b) => {
                let da = a.diff_memo(i, memo);
                let db = b.diff_memo(i, memo);
                da.mul(b).add(&a.mul(&db))
            }
            Node::Div(a, b) => {
                let da = a.diff_memo(i, memo);
                let db = b.diff_memo(i, memo);
                if db.is_zero() {
                    da.div(b)
                } else {
                    da.mul(b).sub(&a.mul(&db)).div(&b.pow(2))
                }
            }
            Node::Pow(a, e) => Self::int(*e as i64)
                .mul(&a.pow(e - 1))
                .mul(&a.diff_memo(i, memo)),
            Node::Sin(a) => a.cos().mul(&a.diff_memo(i, memo)),
            Node::Cos(a) => a.sin().neg().mul(&a.diff_memo(i, memo)),
            Node::Tan(a) => a.diff_memo(i, memo).div(&a.cos().pow(2)),
            Node::Atan(a) => a.diff_memo(i, memo).div(&Self::int(1).add(&a.pow(2))),
        };
        memo.insert(self.key(), d.clone());
        d
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let mut memo = HashMap::new();
        self.eval_memo(x, &mut memo)
    }

    fn eval_memo(&self, x: &[f64], memo: &mut HashMap<*const Inner, f64>) -> f64 {
        if let Some(v) = memo.get(&self.key()) {
            return *v;
        }
        let v = match &self.0.node {
            Node::Const(c) => to_f64(c),
            Node::Var(j) => x[*j],
            Node::Add(a, b) => a.eval_memo(x, memo) + b.eval_memo(x, memo),
            Node::Mul(a, b) => a.eval_memo(x, memo) * b.eval_memo(x, memo),
            Node::Div(a, b) => a.eval_memo(x, memo) / b.eval_memo(x, memo),
            Node::Neg(a) => -a.eval_memo(x, memo),
            Node::Pow(a, e) => a.eval_memo(x, memo).powi(*e as i32),
            Node::Sin(a) => a.eval_memo(x, memo).sin(),
            Node::Cos(a) => a.eval_memo(x, memo).cos(),
            Node::Tan(a) => a.eval_memo(x, memo).tan(),
            Node::Atan(a) => a.eval_memo(x, memo).atan(),
        };
        memo.insert(self.key(), v);
        v
    }

    /// Number of distinct nodes in the DAG.
    pub fn node_count(&self) -> usize {
        fn walk(e: &TrigExpr, seen: &mut std::collections::HashSet<*const Inner>) {
            if !seen.insert(e.key()) {
                return;
            }
            match &e.0.node {
                Node::Const(_) | Node::Var(_) => {}
                Node::Add(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                    walk(a, seen);
                    walk(b, seen);
                }
                Node::Neg(a) | Node::Pow(a, _) | Node::Sin(a) | Node::Cos(a) | Node::Tan(a) | Node::Atan(a) => {
                    walk(a, seen)
                }
            }
        }
        let mut seen = std::collections::HashSet::new();
        walk(self, &mut seen);
        seen.len()
    }

    fn prec(&self) -> u8 {
        match &self.0.node {
            Node::Add(..) => 1,
            Node::Mul(..) | Node::Div(..) => 2,
            Node::Neg(_) => 3,
            Node::Pow(..) => 4,
            Node::Const(c) if c.is_negative() || !c.is_integer() => 3,
            _ => 5,
        }
    }

    /// Text in the DSL's expression grammar; parses back to the same tree.
    pub fn to_text_with(&self, name: &dyn Fn(usize) -> String) -> String {
        let wrap = |e: &TrigExpr, min: u8| {
            let s = e.to_text_with(name);
            if e.prec() < min {
                format!("({s})")
            } else {
                s
            }
        };
        match &self.0.node {
            Node::Const(c) => {
                let s = fmt_rational(c);
                if c.is_negative() || !c.is_integer() {
                    format!("({s})")
                } else {
                    s
                }
            }
            Node::Var(i) => name(*i),
            Node::Add(a, b) => match &b.0.node {
                Node::Neg(inner) => format!("{} - {}", wrap(a, 1), wrap(inner, 2)),
                _ => format!("{} + {}", wrap(a, 1), wrap(b, 2)),
            },
            Node::Mul(a, b) => format!("{}*{}", wrap(a, 2), wrap(b, 3)),
            Node::Div(a, b) => format!("{}/{}", wrap(a, 2), wrap(b, 3)),
            Node::Neg(a) => format!("-{}", wrap(a, 3)),
            Node::Pow(a, e) => format!("{}^{}", wrap(a, 5), e),
            Node::Sin(a) => format!("sin({})", a.to_text_with(name)),
            Node::Cos(a) => format!("cos({})", a.to_text_with(name)),
            Node::Tan(a) => format!("tan({})", a.to_text_with(name)),
            Node::Atan(a) => format!("atan({})", a.to_text_with(name)),
        }
    }
}

/// Trailer-side variable names: `xi1, xi2, th0, th1, ...`.
pub fn trailer_var_name(i: usize) -> String {
    match i {
        0 => "xi1".into(),
        1 => "xi2".into(),
        k => format!("th{}", k - 2),
    }
}

impl fmt::Display for TrigExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text_with(&trailer_var_name))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn folding() {
        let x = TrigExpr::var(0);
        assert!(x.mul(&TrigExpr::int(0)).is_zero());
        assert_eq!(x.add(&TrigExpr::int(0)).to_string(), "xi1");
        assert!(TrigExpr::int(0).cos().is_one());
    }

    #[test]
    fn derivative_of_tan() {
        let t = TrigExpr::var(2).tan();
        let d = t.diff(2);
        let x = [0.0, 0.0, 0.3];
        assert!((d.eval(&x) - 1.0 / 0.3f64.cos().powi(2)).abs() < 1e-14);
        assert!(t.diff(0).is_zero());
    }

    #[test]
    fn derivative_of_atan_quotient() {
        let x = TrigExpr::var(0);
        let y = TrigExpr::var(1);
        let e = x.div(&y).atan();
        let p = [0.7, 1.3];
        let h = 1e-6;
        let fd = (e.eval(&[p[0] + h, p[1]]) - e.eval(&[p[0] - h, p[1]])) / (2.0 * h);
        assert!((e.diff(0).eval(&p) - fd).abs() < 1e-8);
    }

    #[test]
    fn printing_keeps_structure() {
        let x = TrigExpr::var(2);
        let e = x.sin().mul(&TrigExpr::constant(crate::symcore::rational::qf(-1, 2))).sub(&x.pow(2));
        assert_eq!(e.to_string(), "sin(th0)*(-1/2) - th0^2");
    }
}
