mod common;

use common::*;
use concircle_core::soliton::{
    auxiliary_identities, bochner_residual, check_identities, classify, condition_r_dot_s, condition_s_dot_r,
    gradient_constraint_residual, gradient_residuals, lcs_gradient_constraints, nabla_s_conditions,
    r_dot_s_tensor, ricci_norm_bounds, s_dot_r_tensor, shortcut_fit, trace_identity, Classification,
};
use concircle_core::{Error, Expr, Geometry, Kind, LcsStructure, Local, Point, SolitonParams, Verdict};
use proptest::prelude::*;

const TOL: f64 = 1e-9;

fn structure(geo: &Geometry, pts: &[Point]) -> LcsStructure {
    let s = geo.manifold().symbols();
    LcsStructure::derive(geo, parse_all(s, &["0", "0", "1"]), None, pts, TOL).unwrap()
}

fn expr(geo: &Geometry, src: &str) -> Expr {
    geo.manifold().parse(src).unwrap()
}

fn lcs3_params(geo: &Geometry, lambda: &str, mu: &str) -> SolitonParams {
    SolitonParams::gradient(geo, expr(geo, "-z"), expr(geo, lambda), expr(geo, mu), Kind::EtaRicci).unwrap()
}

fn lcs3_soliton(geo: &Geometry) -> SolitonParams {
    lcs3_params(geo, "2*(z - 5)/z^2", "2*(z + 1)/z^2")
}

fn at<'g>(geo: &'g Geometry, p: &[f64]) -> Local<'g> {
    geo.at(p).unwrap()
}

fn milne_points() -> Vec<Point> {
    points(&[[0.0, 1.0, 1.0], [0.5, 2.0, 1.5], [-1.0, 0.7, 3.0], [2.0, 1.3, 0.6]])
}

fn desitter_points() -> Vec<Point> {
    points(&[[0.0, 0.0, 0.0], [0.5, -1.0, 0.7], [-1.0, 0.3, -0.9], [1.0, 1.0, 1.0]])
}

#[test]
fn lcs3_fit_recovers_closed_form() {
    let geo = lcs3();
    let sym = geo.manifold().symbols();
    let params =
        SolitonParams::new(&geo, parse_all(sym, &["0", "0", "1"]), Expr::zero(), Expr::zero(), Kind::EtaRicci)
            .unwrap();
    for p in lcs3_sample() {
        let z = p.0[2];
        let fit = params.fit_at(&at(&geo, &p.0)).unwrap();
        assert!(close(fit.lambda, 2.0 * (z - 5.0) / (z * z), TOL), "lambda at {z}");
        assert!(close(fit.mu, 2.0 * (z + 1.0) / (z * z), TOL), "mu at {z}");
        assert!(fit.residual < TOL);
    }
    let two = params.fit_at(&at(&geo, &[0.0, 0.0, 2.0])).unwrap();
    assert!(close(two.lambda, -1.5, 1e-12) && close(two.mu, 1.5, 1e-12));
    let one = params.fit_at(&at(&geo, &[0.0, 0.0, 1.0])).unwrap();
    assert!(close(one.lambda, -8.0, 1e-12) && close(one.mu, 4.0, 1e-12));
}

#[test]
fn zero_parameters_leave_the_lie_and_ricci_terms() {
    let geo = lcs3();
    let sym = geo.manifold().symbols();
    let params =
        SolitonParams::new(&geo, parse_all(sym, &["0", "0", "1"]), Expr::zero(), Expr::zero(), Kind::EtaRicci)
            .unwrap();
    for z in [1.0, 1.7, 3.0] {
        let loc = at(&geo, &[0.2, -0.4, z]);
        let r = loc.preferred(&params.residual_at(&loc).unwrap());
        // L_ξ g(E1,E1) = -4/z and 2 S(E1,E1) = 20/z²
        assert!(close(r.get(&[0, 0]), -4.0 / z + 20.0 / (z * z), 1e-12));
        assert!(close(r.get(&[2, 2]), -24.0 / (z * z), 1e-12));
        assert!(r.get(&[0, 1]).abs() < 1e-12 && r.get(&[0, 2]).abs() < 1e-12);
    }
    let loc = at(&geo, &[0.0, 0.0, 1.0]);
    assert!(close(loc.preferred(&params.residual_at(&loc).unwrap()).get(&[0, 0]), 16.0, 1e-12));
}

#[test]
fn true_parameters_solve_the_equation() {
    let geo = lcs3();
    let params = lcs3_soliton(&geo);
    for p in lcs3_sample() {
        let loc = at(&geo, &p.0);
        assert!(loc.preferred(&params.residual_at(&loc).unwrap()).max_abs() < TOL);
    }
}

#[test]
fn shortcut_agrees_with_least_squares() {
    let geo = lcs3();
    let pts = lcs3_sample();
    let s = structure(&geo, &pts);
    let params = lcs3_params(&geo, "0", "0");
    for p in &pts {
        let loc = at(&geo, &p.0);
        let st = s.at(&loc).unwrap();
        let fit = params.fit_at(&loc).unwrap();
        let (l, m) = shortcut_fit(&loc, st.xi.data(), st.alpha).unwrap();
        assert!(close(l, fit.lambda, TOL) && close(m, fit.mu, TOL));
    }
}

#[test]
fn einstein_kind_shifts_lambda_by_half_the_scalar_curvature() {
    let geo = lcs3();
    let sym = geo.manifold().symbols();
    let xi = parse_all(sym, &["0", "0", "1"]);
    let ricci = SolitonParams::new(&geo, xi.clone(), Expr::zero(), Expr::zero(), Kind::EtaRicci).unwrap();
    let einstein = SolitonParams::new(&geo, xi, Expr::zero(), Expr::zero(), Kind::EtaEinstein).unwrap();
    for z in [1.0, 2.0, 3.5] {
        let loc = at(&geo, &[0.0, 0.0, z]);
        let (a, b) = (ricci.fit_at(&loc).unwrap(), einstein.fit_at(&loc).unwrap());
        assert!(close(b.lambda, a.lambda + 16.0 / (z * z), 1e-12));
        assert!(close(b.mu, a.mu, 1e-12));
    }
}

#[test]
fn classification_by_sign_of_lambda() {
    let geo = lcs3();
    let params = lcs3_soliton(&geo);
    let lambdas: Vec<f64> = lcs3_sample().iter().map(|p| params.at(&at(&geo, &p.0)).unwrap().lambda).collect();
    assert_eq!(classify(&lambdas, TOL), Classification::Shrinking);
    assert_eq!(classify(&[0.0, 1e-12], TOL), Classification::Steady);
    assert_eq!(classify(&[0.5, 2.0], TOL), Classification::Expanding);
    assert_eq!(classify(&[-0.5, 2.0], TOL), Classification::Mixed);
    assert_eq!(classify(&[-0.5, 0.0], TOL), Classification::Mixed);
}

#[test]
fn structure_identities_on_three_examples() {
    let cases: Vec<(Geometry, Vec<Point>, &str, &str)> = vec![
        (lcs3(), lcs3_sample(), "2*(z - 5)/z^2", "2*(z + 1)/z^2"),
        (milne3(), milne_points(), "-1/tau", "-1/tau"),
        (desitter3(), desitter_points(), "-3", "-1"),
    ];
    for (geo, pts, l, m) in cases {
        let s = structure(&geo, &pts);
        let params = SolitonParams::new(&geo, s.xi().components().to_vec(), expr(&geo, l), expr(&geo, m), Kind::EtaRicci)
            .unwrap();
        let report = check_identities(&geo, &s, &params, &pts, TOL).unwrap();
        assert!(report.passed(), "{}: {:?}", geo.manifold().name(), report.failures().collect::<Vec<_>>());
        let nabla = nabla_s_conditions(&geo, &s, &params, &pts, TOL).unwrap();
        assert!(nabla.closed_form.passed(), "{}", geo.manifold().name());
        for th in &nabla.theorems {
            assert_ne!(th.verdict, Verdict::HoldsFailed, "{} on {}", th.name, geo.manifold().name());
        }
    }
}

#[test]
fn wrong_mu_breaks_the_identities() {
    let geo = lcs3();
    let pts = lcs3_sample();
    let s = structure(&geo, &pts);
    let params = lcs3_params(&geo, "2*(z - 5)/z^2", "2*(z + 1)/z^2 + 1/10");
    let report = check_identities(&geo, &s, &params, &pts, TOL).unwrap();
    assert!(!report.get("mu_minus_lambda").unwrap().passes(TOL));
    assert!(!report.get("scalar_curvature_formula").unwrap().passes(TOL));
}

#[test]
fn nabla_s_verdicts() {
    let geo = desitter3();
    let pts = desitter_points();
    let s = structure(&geo, &pts);
    let params = SolitonParams::new(&geo, s.xi().components().to_vec(), Expr::int(-3), Expr::int(-1), Kind::EtaRicci)
        .unwrap();
    let verdicts: Vec<Verdict> =
        nabla_s_conditions(&geo, &s, &params, &pts, TOL).unwrap().theorems.iter().map(|t| t.verdict).collect();
    assert_eq!(verdicts, [Verdict::HoldsVerified, Verdict::Vacuous, Verdict::HoldsVerified]);

    let geo = lcs3();
    let pts = lcs3_sample();
    let s = structure(&geo, &pts);
    let nabla = nabla_s_conditions(&geo, &s, &lcs3_soliton(&geo), &pts, TOL).unwrap();
    assert!(nabla.theorems.iter().all(|t| t.verdict == Verdict::Vacuous));
}

#[test]
fn r_dot_s_reduction_on_lcs3() {
    let geo = lcs3();
    let pts = lcs3_sample();
    let s = structure(&geo, &pts);
    let out = condition_r_dot_s(&geo, &s, &lcs3_soliton(&geo), &pts, TOL).unwrap();
    for (i, p) in pts.iter().enumerate() {
        let z = p.0[2];
        assert!(close(out.proof_factor[i], 12.0 / z.powi(4), 1e-12));
        assert!(close(out.tensor_factor[i], out.proof_factor[i], TOL));
        assert!(out.expansion[i] < TOL);
    }
    assert_eq!(out.verdict, Verdict::Vacuous);

    let loc = at(&geo, &[0.0, 0.0, 1.0]);
    let t = r_dot_s_tensor(&loc, &[0.0, 0.0, 1.0]);
    // T(E1, E1, ξ) with E1 = z² ∂x
    assert!(close(t.get(&[0, 0, 2]), -12.0, 1e-12));
}

#[test]
fn s_dot_r_reduction_on_lcs3() {
    let geo = lcs3();
    let pts = lcs3_sample();
    let s = structure(&geo, &pts);
    let out = condition_s_dot_r(&geo, &s, &lcs3_soliton(&geo), &pts, TOL).unwrap();
    for (i, p) in pts.iter().enumerate() {
        let z = p.0[2];
        let (alpha, lambda, mu) = (-2.0 / z, 2.0 * (z - 5.0) / (z * z), 2.0 * (z + 1.0) / (z * z));
        let expected = 6.0 / (z * z) * (alpha + 2.0 * lambda - mu);
        assert!(close(out.proof_factor[i], expected, 1e-12));
        assert!(close(out.tensor_factor[i], expected, TOL));
        assert!(out.expansion[i] < TOL);
    }
    assert_eq!(out.verdict, Verdict::Vacuous);
    let one = pts.iter().position(|p| p.0 == [0.0, 0.0, 1.0]).unwrap();
    assert!(close(out.proof_factor[one], -132.0, 1e-12));
}

#[test]
fn condition_verdicts_on_flat_and_de_sitter() {
    let geo = milne3();
    let pts = milne_points();
    let s = structure(&geo, &pts);
    let params = SolitonParams::new(&geo, s.xi().components().to_vec(), expr(&geo, "-1/tau"), expr(&geo, "-1/tau"), Kind::EtaRicci)
        .unwrap();
    assert_eq!(condition_r_dot_s(&geo, &s, &params, &pts, TOL).unwrap().verdict, Verdict::HoldsVerified);
    assert_eq!(condition_s_dot_r(&geo, &s, &params, &pts, TOL).unwrap().verdict, Verdict::HoldsVerified);

    let geo = desitter3();
    let pts = desitter_points();
    let s = structure(&geo, &pts);
    let params = SolitonParams::new(&geo, s.xi().components().to_vec(), Expr::int(-3), Expr::int(-1), Kind::EtaRicci)
        .unwrap();
    let rs = condition_r_dot_s(&geo, &s, &params, &pts, TOL).unwrap();
    assert_eq!(rs.verdict, Verdict::HoldsVerified);
    let sr = condition_s_dot_r(&geo, &s, &params, &pts, TOL).unwrap();
    assert_eq!(sr.verdict, Verdict::Vacuous);
    assert!(sr.expansion.iter().all(|e| *e < TOL));
    // contracted with ξ thrice the tensor is 4(g + η⊗η)
    assert!(sr.tensor_factor.iter().all(|f| close(*f, -4.0, TOL)));
}

#[test]
fn r_dot_s_misreported_mu_fails_the_conclusion() {
    let geo = desitter3();
    let pts = desitter_points();
    let s = structure(&geo, &pts);
    let params = SolitonParams::new(&geo, s.xi().components().to_vec(), Expr::int(-3), Expr::int(-2), Kind::EtaRicci)
        .unwrap();
    assert_eq!(condition_r_dot_s(&geo, &s, &params, &pts, TOL).unwrap().verdict, Verdict::HoldsFailed);
}

fn wedge_s(loc: &Local<'_>, xi: &[f64], x: &[f64], v: &[f64]) -> Vec<f64> {
    let (a, b) = (loc.ricci_apply(x, v), loc.ricci_apply(xi, v));
    xi.iter().zip(x).map(|(p, q)| a * p - b * q).collect()
}

fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(u, v)| u + v).collect()
}

fn contract(t: &concircle_core::TensorValue, vs: &[&[f64]]) -> f64 {
    let n = t.dim();
    let mut acc = 0.0;
    concircle_core::tensor::for_each_index(n, vs.len(), |idx| {
        acc += t.get(idx) * idx.iter().zip(vs).map(|(i, v)| v[*i]).product::<f64>();
    });
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn condition_tensors_match_their_definitions(
        p in prop::array::uniform3(-1.0f64..1.0),
        z in 1.0f64..4.0,
        vs in prop::collection::vec(prop::array::uniform3(-2.0f64..2.0), 5),
    ) {
        let geo = generic3();
        let point = [p[0], p[1], z - 2.5];
        let loc = at(&geo, &point);
        let xi = [0.3, -0.7, 1.1];
        let [x, y, zz, w, v] = [&vs[0][..], &vs[1][..], &vs[2][..], &vs[3][..], &vs[4][..]];

        let rs = r_dot_s_tensor(&loc, &xi);
        let want = loc.ricci_apply(&loc.curvature_apply(&xi, x, y), zz) + loc.ricci_apply(y, &loc.curvature_apply(&xi, x, zz));
        let got = contract(&rs, &[x, y, zz]);
        prop_assert!((got - want).abs() <= 1e-9 * (1.0 + want.abs()));

        let sr = s_dot_r_tensor(&loc, &xi);
        let r = |a: &[f64], b: &[f64], c: &[f64]| loc.curvature_apply(a, b, c);
        let terms = [
            wedge_s(&loc, &xi, x, &r(y, zz, w)),
            r(&wedge_s(&loc, &xi, x, y), zz, w),
            r(y, &wedge_s(&loc, &xi, x, zz), w),
            r(y, zz, &wedge_s(&loc, &xi, x, w)),
        ];
        let total = terms.iter().fold(vec![0.0; 3], |acc: Vec<f64>, t| add(&acc, t));
        let want = loc.inner(&total, v);
        let got = contract(&sr, &[x, y, zz, w, v]);
        prop_assert!((got - want).abs() <= 1e-9 * (1.0 + want.abs()));
    }
}

#[test]
fn gradient_identities_on_lcs3() {
    let geo = lcs3();
    let pts = lcs3_sample();
    let s = structure(&geo, &pts);
    let params = lcs3_soliton(&geo);
    let report = gradient_residuals(&geo, &params, Some(&s), &pts, TOL).unwrap();
    assert_eq!(report.residuals().len(), 3);
    assert!(report.passed(), "{:?}", report.failures().collect::<Vec<_>>());
    let aux = auxiliary_identities(&geo, &params, &pts, TOL).unwrap();
    assert_eq!(aux.residuals().len(), 4);
    assert!(aux.passed(), "{:?}", aux.failures().collect::<Vec<_>>());
    for p in &pts {
        let loc = at(&geo, &p.0);
        assert!(trace_identity(&loc, &params).unwrap().abs() < TOL);
        assert!(bochner_residual(&loc, &params).unwrap().abs() < TOL);
        assert!(gradient_constraint_residual(&loc, &s, &params).unwrap().abs() < TOL);
        let b = ricci_norm_bounds(&loc, &params, TOL).unwrap();
        assert!(b.holds);
        let z = p.0[2];
        assert!(close(b.mid, 344.0 / z.powi(4), TOL));
        assert!(b.constant_length.is_some());
    }
    let constraints = lcs_gradient_constraints(&geo, &s, &params, &pts, TOL).unwrap();
    assert!(constraints.constraint.passed());
    assert!(constraints.constant_params.is_none());
}

#[test]
fn lcs3_bounds_at_unit_height() {
    let geo = lcs3();
    let b = ricci_norm_bounds(&at(&geo, &[0.0, 0.0, 1.0]), &lcs3_soliton(&geo), TOL).unwrap();
    assert!(close(b.lower, 8.0 / 3.0, 1e-12));
    assert!(close(b.mid, 344.0, 1e-12));
    assert!(close(b.upper, 1096.0 / 3.0, 1e-12));
    let (lo, hi) = b.constant_length.unwrap();
    assert!(close(lo, b.lower, 1e-12) && close(hi, b.upper, 1e-12));
    // μ scal |ξ|² = 4 * 32 * (-1)
    assert!(close(b.einstein_upper, b.upper - 128.0, 1e-12));
}

#[test]
fn gradient_constraint_detects_missing_mu() {
    let geo = lcs3();
    let pts = lcs3_sample();
    let s = structure(&geo, &pts);
    let params = lcs3_params(&geo, "2*(z - 5)/z^2", "0");
    for z in [1.0, 2.0, 4.0] {
        let r = gradient_constraint_residual(&at(&geo, &[0.0, 0.0, z]), &s, &params).unwrap();
        assert!(close(r, 10.0 / (z * z) + 12.0 / z.powi(3), 1e-12));
    }
    let r4 = gradient_constraint_residual(&at(&geo, &[0.0, 0.0, 4.0]), &s, &params).unwrap();
    assert!(r4 > 0.1);
}

#[test]
fn gaussian_soliton() {
    let geo = euclidean3();
    let pts = points(&[[0.0, 0.0, 0.0], [1.0, -2.0, 0.5], [-0.3, 0.8, 2.0], [3.0, 1.0, -1.0]]);
    let params =
        SolitonParams::gradient(&geo, expr(&geo, "(x^2 + y^2 + z^2)/2"), Expr::int(-1), Expr::zero(), Kind::EtaRicci)
            .unwrap();
    let report = gradient_residuals(&geo, &params, None, &pts, TOL).unwrap();
    assert!(report.passed(), "{:?}", report.failures().collect::<Vec<_>>());
    assert!(auxiliary_identities(&geo, &params, &pts, TOL).unwrap().passed());
    for p in &pts {
        let loc = at(&geo, &p.0);
        assert!(loc.preferred(&params.residual_at(&loc).unwrap()).max_abs() < TOL);
        let b = ricci_norm_bounds(&loc, &params, TOL).unwrap();
        assert!(b.lower.abs() < 1e-12 && b.mid.abs() < 1e-12 && close(b.upper, 3.0, 1e-12));
        assert!(b.holds);
        assert!(trace_identity(&loc, &params).unwrap().abs() < TOL);
        assert!(bochner_residual(&loc, &params).unwrap().abs() < TOL);
    }
    let lambdas: Vec<f64> = pts.iter().map(|p| params.at(&at(&geo, &p.0)).unwrap().lambda).collect();
    assert_eq!(classify(&lambdas, TOL), Classification::Shrinking);
}

#[test]
fn constant_parameters_force_constant_alpha() {
    let geo = desitter3();
    let pts = desitter_points();
    let s = structure(&geo, &pts);
    let params =
        SolitonParams::gradient(&geo, expr(&geo, "-t"), Expr::int(-3), Expr::int(-1), Kind::EtaRicci).unwrap();
    assert!(gradient_residuals(&geo, &params, Some(&s), &pts, TOL).unwrap().passed());
    let c = lcs_gradient_constraints(&geo, &s, &params, &pts, TOL).unwrap();
    assert!(c.constraint.passed());
    assert!(c.constant_params.unwrap().passed());

    let geo = milne3();
    let pts = milne_points();
    let s = structure(&geo, &pts);
    let params =
        SolitonParams::gradient(&geo, expr(&geo, "-tau"), expr(&geo, "-1/tau"), expr(&geo, "-1/tau"), Kind::EtaRicci)
            .unwrap();
    assert!(gradient_residuals(&geo, &params, Some(&s), &pts, TOL).unwrap().passed());
    assert!(auxiliary_identities(&geo, &params, &pts, TOL).unwrap().passed());
    assert!(lcs_gradient_constraints(&geo, &s, &params, &pts, TOL).unwrap().constraint.passed());
}

#[test]
fn sphere_bounds_hold() {
    let geo = sphere(2);
    let pts = points2(&[[1.0, 0.3], [0.4, 2.0], [2.5, -1.0]]);
    let f = expr(&geo, "cos(theta)");
    let params = SolitonParams::gradient(&geo, f, Expr::zero(), Expr::zero(), Kind::EtaRicci).unwrap();
    for p in &pts {
        let loc = at(&geo, &p.0);
        let b = ricci_norm_bounds(&loc, &params, TOL).unwrap();
        assert!(b.lower <= b.mid + 1e-12 && b.mid <= b.upper + 1e-12);
        // f is no soliton potential, so only the soliton-free identities apply
        let aux = auxiliary_identities(&geo, &params, std::slice::from_ref(p), TOL).unwrap();
        for name in ["contracted_bianchi", "div_hessian", "div_hessian_xi"] {
            assert!(aux.get(name).unwrap().passes(TOL), "{name}");
        }
        assert!(!aux.get("ricci_xi_xi").unwrap().passes(TOL));
    }
}

fn points2(raw: &[[f64; 2]]) -> Vec<Point> {
    raw.iter().map(|p| Point(p.to_vec())).collect()
}

#[test]
fn potential_errors() {
    let geo = lcs3();
    let pts = lcs3_sample();
    let sym = geo.manifold().symbols();
    let xi = parse_all(sym, &["0", "0", "1"]);
    let bare = SolitonParams::new(&geo, xi, Expr::zero(), Expr::zero(), Kind::EtaRicci).unwrap();
    assert!(matches!(gradient_residuals(&geo, &bare, None, &pts, TOL), Err(Error::PotentialAbsent)));
    assert!(matches!(ricci_norm_bounds(&at(&geo, &[0.0, 0.0, 1.0]), &bare, TOL), Err(Error::PotentialAbsent)));
    let wrong = bare.with_potential(&geo, expr(&geo, "z"));
    assert!(matches!(gradient_residuals(&geo, &wrong, None, &pts, TOL), Err(Error::NotGradient { .. })));
    let right = SolitonParams::new(&geo, parse_all(sym, &["0", "0", "1"]), Expr::zero(), Expr::zero(), Kind::EtaRicci)
        .unwrap()
        .with_potential(&geo, expr(&geo, "-z"));
    right.check_potential(&geo, &pts, TOL).unwrap();
}
