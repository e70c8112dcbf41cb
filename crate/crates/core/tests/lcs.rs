mod common;

use common::*;
use concircle_core::lcs::{verify_axioms, verify_prop21, verify_ricci};
use concircle_core::{ChartManifold, Error, Geometry, LcsStructure, Point, Symbols};

const TOL: f64 = 1e-9;

fn lcs3_structure(geo: &Geometry) -> LcsStructure {
    let s = geo.manifold().symbols();
    LcsStructure::derive(geo, parse_all(s, &["0", "0", "1"]), None, &lcs3_sample(), TOL).unwrap()
}

#[test]
fn lcs3_alpha_and_rho() {
    let geo = lcs3();
    let s = lcs3_structure(&geo);
    for p in lcs3_sample() {
        let z = p.0[2];
        let alpha = s.alpha().eval(&p.0).unwrap();
        let rho = s.rho().eval(&p.0).unwrap();
        assert!((alpha + 2.0 / z).abs() <= TOL * (2.0 / z), "alpha at {z}");
        assert!((rho + 2.0 / (z * z)).abs() <= TOL * (2.0 / (z * z)), "rho at {z}");
        let xa = s.xi_alpha().eval(&p.0).unwrap();
        assert!((xa + rho).abs() < 1e-15);
    }
    let one = [0.0, 0.0, 1.0];
    assert_eq!(s.alpha().eval(&one).unwrap(), -2.0);
    assert_eq!(s.rho().eval(&one).unwrap(), -2.0);
    assert_eq!(s.xi_alpha().eval(&one).unwrap(), 2.0);
}

#[test]
fn lcs3_all_identities_hold() {
    let geo = lcs3();
    let s = lcs3_structure(&geo);
    let pts = lcs3_sample();
    for report in [
        verify_axioms(&geo, &s, &pts, TOL).unwrap(),
        verify_prop21(&geo, &s, &pts, TOL).unwrap(),
        verify_ricci(&geo, &s, &pts, TOL).unwrap(),
    ] {
        for r in report.residuals() {
            assert_eq!(r.values.len(), pts.len());
            assert!(r.passes(TOL), "{} = {}", r.name, r.max());
        }
    }
}

#[test]
fn milne_is_lcs_with_positive_alpha() {
    let geo = milne3();
    let pts = points(&[[0.0, 1.0, 1.0], [0.5, 2.0, 1.5], [-1.0, 0.7, 3.0]]);
    let sym = geo.manifold().symbols();
    let s = LcsStructure::derive(&geo, parse_all(sym, &["0", "0", "1"]), None, &pts, TOL).unwrap();
    for p in &pts {
        let tau = p.0[2];
        assert!((s.alpha().eval(&p.0).unwrap() - 1.0 / tau).abs() < 1e-14);
        let loc = geo.at(&p.0).unwrap();
        assert!(loc.riemann().max_abs() < 1e-12, "flat");
    }
    for report in [
        verify_axioms(&geo, &s, &pts, TOL).unwrap(),
        verify_prop21(&geo, &s, &pts, TOL).unwrap(),
        verify_ricci(&geo, &s, &pts, TOL).unwrap(),
    ] {
        assert!(report.passed(), "{:?}", report.failures().collect::<Vec<_>>());
    }
}

#[test]
fn declared_alpha_is_checked_then_used() {
    let geo = lcs3();
    let sym = geo.manifold().symbols();
    let xi = parse_all(sym, &["0", "0", "1"]);
    let declared = sym.parse("-2/z").unwrap();
    let s = LcsStructure::derive(&geo, xi.clone(), Some(declared.clone()), &lcs3_sample(), TOL).unwrap();
    assert_eq!(s.alpha(), &declared.simplify());
    let wrong = sym.parse("-1/z").unwrap();
    let err = LcsStructure::derive(&geo, xi, Some(wrong), &lcs3_sample(), TOL).unwrap_err();
    assert!(matches!(err, Error::AlphaMismatch { .. }));
}

#[test]
fn corrupted_phi_is_reported() {
    let geo = lcs3();
    let sym = geo.manifold().symbols();
    // φ = I, so φE3 = E3 instead of 0
    let identity = parse_all(sym, &["1", "0", "0", "0", "1", "0", "0", "0", "1"]);
    let s = lcs3_structure(&geo).with_phi(identity).unwrap();
    let report = verify_axioms(&geo, &s, &lcs3_sample(), TOL).unwrap();
    assert_eq!(report.get("phi_xi").unwrap().max(), 1.0);
    assert!(!report.passed());
    assert!(report.get("concircular").unwrap().passes(TOL));
}

#[test]
fn lie_derivative_of_metric_is_twice_nabla_eta() {
    let geo = lcs3();
    let s = lcs3_structure(&geo);
    let loc = geo.at(&[0.0, 0.0, 2.0]).unwrap();
    let lie = loc.preferred(&loc.lie_derivative_metric(s.xi()).unwrap());
    let neta = loc.preferred(&loc.covariant_derivative(s.eta()).unwrap());
    assert!((lie.get(&[0, 0]) + 2.0).abs() < 1e-14, "2 alpha at z = 2");
    assert!((neta.get(&[0, 0]) + 1.0).abs() < 1e-14);
    let k = s.at(&loc).unwrap().k();
    assert!((k - 1.5).abs() < 1e-14, "6/z^2");
    let r = loc.preferred(loc.riemann());
    assert!((r.get(&[0, 0, 2, 2]) + k).abs() < 1e-14);
}

#[test]
fn precondition_failures() {
    let s3 = Symbols::new(&["x", "y", "t"]);
    let mink = parse_all(&s3, &["1", "0", "0", "0", "1", "0", "0", "0", "-1"]);
    let geo = Geometry::new(ChartManifold::new("minkowski3", s3.clone(), mink).unwrap()).unwrap();
    let pts = vec![Point(vec![0.0, 0.0, 0.0])];
    let err = LcsStructure::derive(&geo, parse_all(&s3, &["0", "0", "1"]), None, &pts, TOL).unwrap_err();
    assert!(matches!(err, Error::AlphaVanishes { .. }));

    let eucl = parse_all(&s3, &["1", "0", "0", "0", "1", "0", "0", "0", "1"]);
    let geo = Geometry::new(ChartManifold::new("euclidean3", s3.clone(), eucl).unwrap()).unwrap();
    let err = LcsStructure::derive(&geo, parse_all(&s3, &["0", "0", "1"]), None, &pts, TOL).unwrap_err();
    assert!(matches!(err, Error::NotUnitTimelike { value } if value == 1.0));

    // unit timelike but only one spatial direction expands
    let s = Symbols::new(&["x", "y", "z"]);
    let g = parse_all(&s, &["z^(-4)", "0", "0", "0", "1", "0", "0", "0", "-1"]);
    let geo = Geometry::new(ChartManifold::new("anisotropic", s.clone(), g).unwrap()).unwrap();
    let err = LcsStructure::derive(&geo, parse_all(&s, &["0", "0", "1"]), None, &points(&[[0.0, 0.0, 1.0]]), TOL)
        .unwrap_err();
    assert!(matches!(err, Error::NotConcircular { residual } if (residual - 1.0).abs() < 1e-12));
}
