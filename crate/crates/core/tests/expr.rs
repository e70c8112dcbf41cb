use concircle_core::expr::{Expr, Rational};
use concircle_core::Symbols;
use proptest::prelude::*;

fn symbols() -> Symbols {
    Symbols::new(&["x", "y", "z"])
}

/// Random expressions whose domain covers the cube [-1, 1]^3: every
/// denominator, log argument and sqrt argument is kept away from zero.
fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0usize..3).prop_map(|i| Expr::coord(i, ["x", "y", "z"][i])),
        (-5i64..=5, 1i64..=4).prop_map(|(n, d)| Expr::rational(Rational::new(n, d))),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        let positive = |e: Expr| Expr::int(2) + e.sin();
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a + b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a - b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a * b),
            (inner.clone(), inner.clone()).prop_map(move |(a, b)| a / positive(b)),
            (inner.clone(), -3i32..=3).prop_map(move |(a, k)| positive(a).powi(k)),
            inner.clone().prop_map(|a| -a),
            inner.clone().prop_map(Expr::sin),
            inner.clone().prop_map(Expr::cos),
            inner.clone().prop_map(|a| a.sin().exp()),
            inner.clone().prop_map(move |a| positive(a).ln()),
            inner.clone().prop_map(move |a| positive(a).sqrt()),
        ]
    })
}

fn central_difference(e: &Expr, p: &[f64; 3], m: usize, h: f64) -> f64 {
    let (mut a, mut b) = (*p, *p);
    a[m] += h;
    b[m] -= h;
    (e.eval(&a).unwrap() - e.eval(&b).unwrap()) / (2.0 * h)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn derivative_matches_finite_difference(e in arb_expr(), p in prop::array::uniform3(-1.0..1.0f64)) {
        for m in 0..3 {
            let d = e.diff(m).eval(&p).unwrap();
            // Richardson-extrapolated central difference: O(h^4) error
            let h = 1e-3;
            let fd = (4.0 * central_difference(&e, &p, m, h / 2.0) - central_difference(&e, &p, m, h)) / 3.0;
            prop_assert!((d - fd).abs() <= 1e-6 * d.abs().max(1.0), "{e}: d/dx{m} = {d}, fd = {fd}");
        }
    }

    #[test]
    fn simplify_preserves_value(e in arb_expr(), p in prop::array::uniform3(-1.0..1.0f64)) {
        let a = e.eval(&p).unwrap();
        let b = e.simplify().eval(&p).unwrap();
        prop_assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0));
    }

    #[test]
    fn printed_source_reparses_to_same_value(e in arb_expr(), p in prop::array::uniform3(-1.0..1.0f64)) {
        let back = symbols().parse(&e.to_source()).unwrap();
        let (a, b) = (e.eval(&p).unwrap(), back.eval(&p).unwrap());
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0), "{e}");
    }

    #[test]
    fn directional_derivative_is_linear_in_partials(e in arb_expr(), p in prop::array::uniform3(-1.0..1.0f64)) {
        let s = symbols();
        let v = vec![s.parse("y").unwrap(), Expr::int(2), s.parse("x*z").unwrap()];
        let dir = e.directional(&v).eval(&p).unwrap();
        let manual: f64 = (0..3).map(|m| v[m].eval(&p).unwrap() * e.diff(m).eval(&p).unwrap()).sum();
        prop_assert!((dir - manual).abs() <= 1e-9 * manual.abs().max(1.0));
    }
}

#[test]
fn second_derivatives_commute() {
    let e = symbols().parse("exp(x*y)*sin(z) / (2 + cos(x))").unwrap();
    let p = [0.3, -0.4, 0.7];
    let xy = e.diff(0).diff(1).eval(&p).unwrap();
    let yx = e.diff(1).diff(0).eval(&p).unwrap();
    assert!((xy - yx).abs() < 1e-13);
}
