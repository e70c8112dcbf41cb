use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::{CheckedAdd, CheckedMul, One, Signed, Zero};

use super::{rational_powi, Expr, Node, Rational};

impl Expr {
    /// Local rewriting to an evaluation-equivalent tree: identity and
    /// annihilator rules, constant folding, power merging across flattened
    /// products and quotients, and like-term collection across flattened sums.
    pub fn simplify(&self) -> Expr {
        let mut memo = BTreeMap::new();
        simplify_memo(self, &mut memo)
    }
}

fn simplify_memo(e: &Expr, memo: &mut BTreeMap<usize, Expr>) -> Expr {
    if let Some(s) = memo.get(&e.addr()) {
        return s.clone();
    }
    let s = match e.node() {
        Node::Const(_) | Node::Coord(..) => e.clone(),
        Node::Apply(f, a) => Expr::apply(*f, simplify_memo(a, memo)),
        Node::Neg(_) | Node::Mul(..) | Node::Div(..) | Node::Pow(..) => {
            let rebuilt = rebuild_shallow(e, memo);
            flatten_product(&rebuilt).unwrap_or(rebuilt)
        }
        Node::Add(..) | Node::Sub(..) => {
            let rebuilt = rebuild_shallow(e, memo);
            collect_sum(&rebuilt).unwrap_or(rebuilt)
        }
    };
    memo.insert(e.addr(), s.clone());
    s
}

fn rebuild_shallow(e: &Expr, memo: &mut BTreeMap<usize, Expr>) -> Expr {
    match e.node() {
        Node::Neg(a) => -simplify_memo(a, memo),
        Node::Add(a, b) => simplify_memo(a, memo) + simplify_memo(b, memo),
        Node::Sub(a, b) => simplify_memo(a, memo) - simplify_memo(b, memo),
        Node::Mul(a, b) => simplify_memo(a, memo) * simplify_memo(b, memo),
        Node::Div(a, b) => simplify_memo(a, memo) / simplify_memo(b, memo),
        Node::Pow(a, k) => simplify_memo(a, memo).powi(*k),
        _ => e.clone(),
    }
}

struct Product {
    coeff: Rational,
    factors: Vec<(Expr, i32)>,
}

impl Product {
    fn push(&mut self, base: Expr, k: i32) {
        if let Some(slot) = self.factors.iter_mut().find(|(b, _)| *b == base) {
            slot.1 += k;
        } else {
            self.factors.push((base, k));
        }
    }

    // Returns None on rational overflow or a literal zero in a denominator.
    fn collect(&mut self, e: &Expr, k: i32) -> Option<()> {
        match e.node() {
            Node::Const(r) => {
                self.coeff = self.coeff.checked_mul(&rational_powi(*r, k)?)?;
            }
            Node::Neg(a) => {
                if k % 2 != 0 {
                    self.coeff = -self.coeff;
                }
                self.collect(a, k)?;
            }
            Node::Mul(a, b) => {
                self.collect(a, k)?;
                self.collect(b, k)?;
            }
            Node::Div(a, b) => {
                self.collect(a, k)?;
                self.collect(b, i32::checked_neg(k)?)?;
            }
            Node::Pow(a, j) => self.collect(a, i32::checked_mul(k, *j)?)?,
            _ => self.push(e.clone(), k),
        }
        Some(())
    }
}

fn flatten_product(e: &Expr) -> Option<Expr> {
    let mut p = Product { coeff: Rational::one(), factors: Vec::new() };
    p.collect(e, 1)?;
    if p.coeff.is_zero() {
        return Some(Expr::zero());
    }
    let mut num = Expr::one();
    let mut den = Expr::one();
    for (base, k) in p.factors {
        if k > 0 {
            num = num * base.powi(k);
        } else if k < 0 {
            den = den * base.powi(-k);
        }
    }
    Some(Expr::rational(p.coeff) * (num / den))
}

fn collect_terms(e: &Expr, sign: Rational, terms: &mut Vec<(Rational, Expr)>, constant: &mut Rational) -> Option<()> {
    match e.node() {
        Node::Add(a, b) => {
            collect_terms(a, sign, terms, constant)?;
            collect_terms(b, sign, terms, constant)?;
        }
        Node::Sub(a, b) => {
            collect_terms(a, sign, terms, constant)?;
            collect_terms(b, -sign, terms, constant)?;
        }
        Node::Neg(a) => collect_terms(a, -sign, terms, constant)?,
        Node::Const(r) => *constant = constant.checked_add(&r.checked_mul(&sign)?)?,
        _ => {
            let (c, rest) = e.split_coeff();
            let c = c.checked_mul(&sign)?;
            if let Some(slot) = terms.iter_mut().find(|(_, t)| *t == rest) {
                slot.0 = slot.0.checked_add(&c)?;
            } else {
                terms.push((c, rest));
            }
        }
    }
    Some(())
}

fn collect_sum(e: &Expr) -> Option<Expr> {
    let mut terms = Vec::new();
    let mut constant = Rational::zero();
    collect_terms(e, Rational::one(), &mut terms, &mut constant)?;
    let mut acc = Expr::zero();
    for (c, t) in terms {
        if c.is_zero() {
            continue;
        }
        if c.is_negative() {
            acc = acc - Expr::rational(-c) * t;
        } else {
            acc = acc + Expr::rational(c) * t;
        }
    }
    Some(acc + Expr::rational(constant))
}

#[cfg(test)]
mod tests {
    use super::super::Symbols;
    use super::*;

    fn s() -> Symbols {
        Symbols::new(&["x", "y", "z"])
    }

    #[test]
    fn annihilator_and_identity() {
        let e = s().parse("0*sin(x) + y").unwrap().simplify();
        assert_eq!(e, Expr::coord(1, "y"));
    }

    #[test]
    fn power_merge() {
        let e = s().parse("x^2 * x^(-1)").unwrap().simplify();
        assert_eq!(e, Expr::coord(0, "x"));
    }

    #[test]
    fn cancellation_to_constant() {
        let e = s().parse("(2/z^2)*z^2").unwrap().simplify();
        assert_eq!(e, Expr::int(2));
    }

    #[test]
    fn like_terms_across_nesting() {
        let e = s().parse("x + (y - (x - 3)) - y").unwrap().simplify();
        assert_eq!(e, Expr::int(3));
    }

    #[test]
    fn inverse_of_diagonal_entry() {
        // cofactor / determinant for diag(z^-4, z^-4, -1)
        let e = s().parse("(z^(-4)*(-1)) / (z^(-4)*z^(-4)*(-1))").unwrap().simplify();
        assert_eq!(e, s().parse("z^4").unwrap().simplify());
    }
}
