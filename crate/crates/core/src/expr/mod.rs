//! Closed-form scalar expressions over chart coordinates.
//!
//! An [`Expr`] is an immutable, reference-counted tree. Subtrees are shared
//! freely, so cloning is cheap and derivative trees reuse their inputs.
//! The arithmetic operators build nodes through local rewriting constructors
//! (`0*x -> 0`, `x^a * x^b -> x^(a+b)`, constant folding) so that derivative
//! chains stay small; [`Expr::simplify`] applies the same rules plus product
//! flattening and like-term collection over a whole tree.

mod diff;
mod eval;
mod parse;
mod print;
mod simplify;

use alloc::string::String;
use alloc::sync::Arc;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Zero};

pub use eval::{eval_all, EvalError};
pub use parse::{ParseError, Symbols};

/// Exact rational constant.
pub type Rational = num_rational::Ratio<i64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Const(Rational),
    /// Coordinate reference: chart index plus display name.
    Coord(usize, Arc<str>),
    Neg(Expr),
    Add(Expr, Expr),
    Sub(Expr, Expr),
    Mul(Expr, Expr),
    Div(Expr, Expr),
    Pow(Expr, i32),
    Apply(Func, Expr),
}

#[derive(Clone)]
pub struct Expr(Arc<Node>);

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&*self.0, f)
    }
}

impl Expr {
    /// Wraps a node verbatim, without any rewriting.
    pub fn from_node(node: Node) -> Expr {
        Expr(Arc::new(node))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub(crate) fn addr(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    pub fn int(v: i64) -> Expr {
        Expr::rational(Rational::from_integer(v))
    }

    pub fn rational(r: Rational) -> Expr {
        Expr::from_node(Node::Const(r))
    }

    pub fn zero() -> Expr {
        Expr::int(0)
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    pub fn coord(index: usize, name: &str) -> Expr {
        Expr::from_node(Node::Coord(index, Arc::from(name)))
    }

    pub fn as_const(&self) -> Option<Rational> {
        match self.node() {
            Node::Const(r) => Some(*r),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const().is_some_and(|r| r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.as_const().is_some_and(|r| r.is_one())
    }

    /// Number of nodes counted as a tree (shared subtrees counted per use).
    pub fn tree_size(&self) -> usize {
        1 + match self.node() {
            Node::Const(_) | Node::Coord(..) => 0,
            Node::Neg(a) | Node::Pow(a, _) | Node::Apply(_, a) => a.tree_size(),
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                a.tree_size() + b.tree_size()
            }
        }
    }

    /// Whether the coordinate `index` occurs anywhere in the tree.
    pub fn depends_on(&self, index: usize) -> bool {
        match self.node() {
            Node::Const(_) => false,
            Node::Coord(i, _) => *i == index,
            Node::Neg(a) | Node::Pow(a, _) | Node::Apply(_, a) => a.depends_on(index),
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                a.depends_on(index) || b.depends_on(index)
            }
        }
    }

    pub fn apply(func: Func, arg: Expr) -> Expr {
        Expr::from_node(Node::Apply(func, arg))
    }

    pub fn sin(self) -> Expr {
        Expr::apply(Func::Sin, self)
    }
    pub fn cos(self) -> Expr {
        Expr::apply(Func::Cos, self)
    }
    pub fn exp(self) -> Expr {
        Expr::apply(Func::Exp, self)
    }
    pub fn ln(self) -> Expr {
        Expr::apply(Func::Log, self)
    }
    pub fn sqrt(self) -> Expr {
        Expr::apply(Func::Sqrt, self)
    }

    /// `self^k` with local rewriting.
    pub fn powi(self, k: i32) -> Expr {
        if k == 0 {
            return Expr::one();
        }
        if k == 1 {
            return self;
        }
        if let Some(r) = self.as_const() {
            if let Some(v) = rational_powi(r, k) {
                return Expr::rational(v);
            }
        }
        match self.node() {
            Node::Pow(base, j) => match i32::checked_mul(*j, k) {
                Some(e) => base.clone().powi(e),
                None => Expr::from_node(Node::Pow(self, k)),
            },
            _ => Expr::from_node(Node::Pow(self, k)),
        }
    }

    /// Splits `c * x` into `(c, x)`; anything else is `(1, self)`.
    fn split_coeff(&self) -> (Rational, Expr) {
        match self.node() {
            Node::Const(r) => (*r, Expr::one()),
            Node::Neg(a) => {
                let (c, rest) = a.split_coeff();
                (-c, rest)
            }
            Node::Mul(a, b) => match a.as_const() {
                Some(c) => (c, b.clone()),
                None => (Rational::one(), self.clone()),
            },
            _ => (Rational::one(), self.clone()),
        }
    }

    /// Splits `x^k` into `(x, k)`; anything else is `(self, 1)`.
    fn split_pow(&self) -> (Expr, i32) {
        match self.node() {
            Node::Pow(b, k) => (b.clone(), *k),
            _ => (self.clone(), 1),
        }
    }
}

pub(crate) fn rational_powi(r: Rational, k: i32) -> Option<Rational> {
    if k < 0 && r.is_zero() {
        return None;
    }
    let base = if k < 0 { r.recip() } else { r };
    let mut acc = Rational::one();
    for _ in 0..k.unsigned_abs() {
        acc = acc.checked_mul(&base)?;
    }
    Some(acc)
}

fn fold(a: &Expr, b: &Expr, op: impl Fn(Rational, Rational) -> Option<Rational>) -> Option<Expr> {
    Some(Expr::rational(op(a.as_const()?, b.as_const()?)?))
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        if let Some(r) = self.as_const() {
            if let Some(v) = Rational::zero().checked_sub(&r) {
                return Expr::rational(v);
            }
        }
        match self.node() {
            Node::Neg(a) => a.clone(),
            Node::Sub(a, b) => Expr::from_node(Node::Sub(b.clone(), a.clone())),
            Node::Mul(a, b) if a.as_const().is_some() => -a.clone() * b.clone(),
            _ => Expr::from_node(Node::Neg(self)),
        }
    }
}

impl Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        if let Some(v) = fold(&self, &rhs, |a, b| a.checked_add(&b)) {
            return v;
        }
        if let Node::Neg(b) = rhs.node() {
            return self - b.clone();
        }
        let (ca, ra) = self.split_coeff();
        let (cb, rb) = rhs.split_coeff();
        if ra == rb && ra.as_const().is_none() {
            if let Some(c) = ca.checked_add(&cb) {
                return Expr::rational(c) * ra;
            }
        }
        Expr::from_node(Node::Add(self, rhs))
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        if rhs.is_zero() {
            return self;
        }
        if self.is_zero() {
            return -rhs;
        }
        if let Some(v) = fold(&self, &rhs, |a, b| a.checked_sub(&b)) {
            return v;
        }
        if let Node::Neg(b) = rhs.node() {
            return self + b.clone();
        }
        let (ca, ra) = self.split_coeff();
        let (cb, rb) = rhs.split_coeff();
        if ra == rb && ra.as_const().is_none() {
            if let Some(c) = ca.checked_sub(&cb) {
                return Expr::rational(c) * ra;
            }
        }
        Expr::from_node(Node::Sub(self, rhs))
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        if self.is_zero() || rhs.is_zero() {
            return Expr::zero();
        }
        if self.is_one() {
            return rhs;
        }
        if rhs.is_one() {
            return self;
        }
        if let Some(v) = fold(&self, &rhs, |a, b| a.checked_mul(&b)) {
            return v;
        }
        // keep constants on the left
        if rhs.as_const().is_some() && self.as_const().is_none() {
            return rhs * self;
        }
        if let Some(c) = self.as_const() {
            if c == -Rational::one() {
                return -rhs;
            }
            match rhs.node() {
                Node::Neg(b) => return Expr::rational(-c) * b.clone(),
                Node::Mul(a, b) => {
                    if let Some(d) = a.as_const() {
                        if let Some(cd) = c.checked_mul(&d) {
                            return Expr::rational(cd) * b.clone();
                        }
                    }
                }
                _ => {}
            }
            return Expr::from_node(Node::Mul(self, rhs));
        }
        if let Node::Neg(a) = self.node() {
            return -(a.clone() * rhs);
        }
        if let Node::Neg(b) = rhs.node() {
            return -(self * b.clone());
        }
        let (ba, ka) = self.split_pow();
        let (bb, kb) = rhs.split_pow();
        if ba == bb {
            if let Some(k) = i32::checked_add(ka, kb) {
                return ba.powi(k);
            }
        }
        Expr::from_node(Node::Mul(self, rhs))
    }
}

impl Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        if rhs.is_one() {
            return self;
        }
        if self.is_zero() && !rhs.is_zero() {
            return Expr::zero();
        }
        if let Some(v) = fold(&self, &rhs, |a, b| if b.is_zero() { None } else { a.checked_div(&b) }) {
            return v;
        }
        if let Some(c) = rhs.as_const() {
            if !c.is_zero() {
                return Expr::rational(c.recip()) * self;
            }
        }
        if let Node::Neg(a) = self.node() {
            return -(a.clone() / rhs);
        }
        if let Node::Neg(b) = rhs.node() {
            return -(self / b.clone());
        }
        let (ba, ka) = self.split_pow();
        let (bb, kb) = rhs.split_pow();
        if ba == bb {
            if let Some(k) = i32::checked_sub(ka, kb) {
                return ba.powi(k);
            }
        }
        Expr::from_node(Node::Div(self, rhs))
    }
}

macro_rules! ref_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr<&Expr> for &Expr {
            type Output = Expr;
            fn $f(self, rhs: &Expr) -> Expr {
                $tr::$f(self.clone(), rhs.clone())
            }
        }
        impl $tr<&Expr> for Expr {
            type Output = Expr;
            fn $f(self, rhs: &Expr) -> Expr {
                $tr::$f(self, rhs.clone())
            }
        }
        impl $tr<Expr> for &Expr {
            type Output = Expr;
            fn $f(self, rhs: Expr) -> Expr {
                $tr::$f(self.clone(), rhs)
            }
        }
    )*};
}
ref_ops!(Add add, Sub sub, Mul mul, Div div);

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -self.clone()
    }
}

impl From<i64> for Expr {
    fn from(v: i64) -> Expr {
        Expr::int(v)
    }
}

/// Sum of an iterator of expressions.
pub fn sum<I: IntoIterator<Item = Expr>>(terms: I) -> Expr {
    terms.into_iter().fold(Expr::zero(), |acc, t| acc + t)
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print::write_expr(f, self, 0)
    }
}

impl Expr {
    /// Renders the expression in the parser's grammar.
    pub fn to_source(&self) -> String {
        alloc::format!("{self}")
    }
}
