use alloc::collections::BTreeMap;

use super::{Expr, Func, Node};

impl Expr {
    /// Exact partial derivative with respect to the coordinate `index`.
    pub fn diff(&self, index: usize) -> Expr {
        let mut memo = BTreeMap::new();
        diff_memo(self, index, &mut memo).simplify()
    }

    /// Derivative along a vector field: `sum_i v[i] * d(self)/dx_i`.
    pub fn directional(&self, v: &[Expr]) -> Expr {
        super::sum(
            v.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| c * self.diff(i)),
        )
        .simplify()
    }
}

// Shared subtrees are differentiated once; keys are node addresses, which
// stay valid because `e` keeps every node alive for the duration of the call.
fn diff_memo(e: &Expr, var: usize, memo: &mut BTreeMap<usize, Expr>) -> Expr {
    if let Some(d) = memo.get(&e.addr()) {
        return d.clone();
    }
    let d = match e.node() {
        Node::Const(_) => Expr::zero(),
        Node::Coord(i, _) => {
            if *i == var {
                Expr::one()
            } else {
                Expr::zero()
            }
        }
        Node::Neg(a) => -diff_memo(a, var, memo),
        Node::Add(a, b) => diff_memo(a, var, memo) + diff_memo(b, var, memo),
        Node::Sub(a, b) => diff_memo(a, var, memo) - diff_memo(b, var, memo),
        Node::Mul(a, b) => {
            let da = diff_memo(a, var, memo);
            let db = diff_memo(b, var, memo);
            da * b + a * db
        }
        Node::Div(a, b) => {
            let da = diff_memo(a, var, memo);
            let db = diff_memo(b, var, memo);
            da / b - a * db / b.clone().powi(2)
        }
        Node::Pow(a, k) => {
            let da = diff_memo(a, var, memo);
            Expr::int(i64::from(*k)) * a.clone().powi(k - 1) * da
        }
        Node::Apply(func, a) => {
            let da = diff_memo(a, var, memo);
            let outer = match func {
                Func::Sin => a.clone().cos(),
                Func::Cos => -a.clone().sin(),
                Func::Exp => e.clone(),
                Func::Log => Expr::one() / a,
                Func::Sqrt => Expr::one() / (Expr::int(2) * e),
            };
            outer * da
        }
    };
    memo.insert(e.addr(), d.clone());
    d
}
