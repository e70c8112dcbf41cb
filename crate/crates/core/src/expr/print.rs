use core::fmt;

use num_traits::{One, Signed};

use super::{Expr, Node};

// binding levels: sum 0, product 1, unary minus 2, power 3, atom 4
fn level(e: &Expr) -> u8 {
    match e.node() {
        Node::Add(..) | Node::Sub(..) => 0,
        Node::Mul(..) | Node::Div(..) => 1,
        Node::Neg(_) => 2,
        Node::Pow(..) => 3,
        Node::Const(r) if !r.denom().is_one() => 1,
        Node::Const(r) if r.is_negative() => 2,
        Node::Const(_) | Node::Coord(..) | Node::Apply(..) => 4,
    }
}

pub(super) fn write_expr(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    let paren = level(e) < min;
    if paren {
        f.write_str("(")?;
    }
    match e.node() {
        Node::Const(r) => {
            if r.denom().is_one() {
                write!(f, "{}", r.numer())?;
            } else {
                write!(f, "{}/{}", r.numer(), r.denom())?;
            }
        }
        Node::Coord(_, name) => f.write_str(name)?,
        Node::Neg(a) => {
            f.write_str("-")?;
            write_expr(f, a, 3)?;
        }
        Node::Add(a, b) => {
            write_expr(f, a, 0)?;
            f.write_str(" + ")?;
            write_expr(f, b, 1)?;
        }
        Node::Sub(a, b) => {
            write_expr(f, a, 0)?;
            f.write_str(" - ")?;
            write_expr(f, b, 1)?;
        }
        Node::Mul(a, b) => {
            write_expr(f, a, 1)?;
            f.write_str("*")?;
            write_expr(f, b, 2)?;
        }
        Node::Div(a, b) => {
            write_expr(f, a, 1)?;
            f.write_str("/")?;
            write_expr(f, b, 2)?;
        }
        Node::Pow(a, k) => {
            write_expr(f, a, 4)?;
            if *k < 0 {
                write!(f, "^({k})")?;
            } else {
                write!(f, "^{k}")?;
            }
        }
        Node::Apply(func, a) => {
            f.write_str(func.name())?;
            f.write_str("(")?;
            write_expr(f, a, 0)?;
            f.write_str(")")?;
        }
    }
    if paren {
        f.write_str(")")?;
    }
    Ok(())
}
