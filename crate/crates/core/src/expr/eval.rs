use alloc::string::String;
use core::fmt;

use super::{Expr, Func, Node};

#[derive(Clone, Debug, PartialEq)]
pub enum EvalError {
    /// The point lies outside the natural domain of a subexpression.
    Domain { reason: &'static str, expr: String },
    /// The point does not bind the referenced coordinate.
    MissingCoordinate { index: usize },
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::Domain { reason, expr } => write!(f, "domain violation ({reason}) in `{expr}`"),
            EvalError::MissingCoordinate { index } => write!(f, "point has no value for coordinate #{index}"),
        }
    }
}

impl core::error::Error for EvalError {}

fn domain(reason: &'static str, e: &Expr) -> EvalError {
    let mut text = e.to_source();
    if text.len() > 96 {
        let mut cut = 93;
        while !text.is_char_boundary(cut) {
            cut -= 1;
        }
        text.truncate(cut);
        text.push_str("...");
    }
    EvalError::Domain { reason, expr: text }
}

impl Expr {
    /// Evaluates at a point given as one value per chart coordinate.
    pub fn eval(&self, point: &[f64]) -> Result<f64, EvalError> {
        let v = match self.node() {
            Node::Const(r) => *r.numer() as f64 / *r.denom() as f64,
            Node::Coord(i, _) => *point.get(*i).ok_or(EvalError::MissingCoordinate { index: *i })?,
            Node::Neg(a) => -a.eval(point)?,
            Node::Add(a, b) => a.eval(point)? + b.eval(point)?,
            Node::Sub(a, b) => a.eval(point)? - b.eval(point)?,
            Node::Mul(a, b) => a.eval(point)? * b.eval(point)?,
            Node::Div(a, b) => {
                let den = b.eval(point)?;
                if den == 0.0 {
                    return Err(domain("division by zero", b));
                }
                a.eval(point)? / den
            }
            Node::Pow(a, k) => {
                let base = a.eval(point)?;
                if *k < 0 && base == 0.0 {
                    return Err(domain("negative power of zero", a));
                }
                libm::pow(base, f64::from(*k))
            }
            Node::Apply(func, a) => {
                let x = a.eval(point)?;
                match func {
                    Func::Sin => libm::sin(x),
                    Func::Cos => libm::cos(x),
                    Func::Exp => libm::exp(x),
                    Func::Log => {
                        if x <= 0.0 {
                            return Err(domain("logarithm of non-positive value", a));
                        }
                        libm::log(x)
                    }
                    Func::Sqrt => {
                        if x < 0.0 {
                            return Err(domain("square root of negative value", a));
                        }
                        libm::sqrt(x)
                    }
                }
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(domain("non-finite value", self))
        }
    }
}

/// Evaluates a slice of expressions at one point.
pub fn eval_all(exprs: &[Expr], point: &[f64]) -> Result<alloc::vec::Vec<f64>, EvalError> {
    exprs.iter().map(|e| e.eval(point)).collect()
}
