use concircle::file::ManifoldFile;
use concircle::fixtures::{bundled, BUNDLED};
use concircle::sampling::sample_points;
use concircle::Error;

fn parse(src: &str) -> Result<ManifoldFile, Error> {
    ManifoldFile::parse("test.ini", src)
}

fn load(name: &str) -> ManifoldFile {
    ManifoldFile::parse(name, bundled(name).unwrap()).unwrap()
}

fn syntax_line(err: Error) -> (usize, String) {
    match err {
        Error::Syntax { line, message, .. } => (line, message),
        other => panic!("expected a syntax error, got {other:?}"),
    }
}

#[test]
fn lcs3_example_loads_with_dim_3() {
    let file = load("lcs3-example");
    assert_eq!(file.coords, ["x", "y", "z"]);
    let model = file.build(&[]).unwrap();
    assert_eq!(model.geometry.dim(), 3);
    assert!(model.geometry.has_frame());
    assert!(model.structure.is_some() && model.soliton.is_some());
    let g = model.geometry.at(&[0.3, -0.2, 2.0]).unwrap();
    assert!((g.metric().get(&[0, 0]) - 1.0 / 16.0).abs() < 1e-15);
    assert_eq!(g.metric().get(&[2, 2]), -1.0);
}

#[test]
fn minkowski3_has_constant_metric() {
    let model = load("minkowski3").build(&[]).unwrap();
    for p in [[0.0, 0.0, 0.0], [1.5, -2.0, 7.0]] {
        let loc = model.geometry.at(&p).unwrap();
        assert_eq!(loc.metric().data(), &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, -1.0]);
    }
}

#[test]
fn every_bundled_fixture_parses_and_builds() {
    for (name, src) in BUNDLED {
        let file = ManifoldFile::parse(name, src).unwrap();
        assert_eq!(file.name, *name);
        file.build(&[]).unwrap();
    }
    assert!(bundled("gaussian3").is_some());
}

#[test]
fn metric_index_outside_range() {
    let src = "[manifold]\nname = \"bad\"\ndim = 2\ncoords = \"x, y\"\n\n[metric]\ng_11 = \"1\"\ng_22 = \"1\"\ng_33 = \"1\"\n";
    let (line, message) = syntax_line(parse(src).unwrap_err());
    assert_eq!(line, 9);
    assert!(message.contains("outside"), "{message}");
}

#[test]
fn dimension_must_match_coordinates() {
    let src = "[manifold]\nname = \"bad\"\ndim = 3\ncoords = \"x, y\"\n[metric]\ng_11 = \"1\"\ng_22 = \"1\"\n";
    let (line, message) = syntax_line(parse(src).unwrap_err());
    assert_eq!(line, 3);
    assert!(message.contains("dim"), "{message}");
}

#[test]
fn diagonal_entries_are_required() {
    let src = "[manifold]\nname = \"bad\"\ndim = 2\ncoords = \"x, y\"\n[metric]\ng_11 = \"1\"\ng_12 = \"0\"\n";
    let err = parse(src).unwrap_err();
    assert!(err.to_string().contains("g_22"), "{err}");
}

#[test]
fn malformed_lines_report_their_line() {
    let cases = [
        ("[manifold]\nname = \"m\"\ndim = 2\ncoords = \"x, y\"\n[metric]\ng_11 = \"1\"\n[bogus]\n", 7),
        ("[manifold]\nname = \"m\"\ndim = 2\ncoords = \"x, y\"\n[metric]\ng_11 = \"1\"\ng_11 = \"2\"\n", 7),
        ("[manifold]\nname = \"m\"\ndim = 2\ncoords = \"x, y\"\nwhat = \"1\"\n", 5),
        ("[manifold]\nname = \"m\nno closing quote\n", 2),
        ("key = \"outside a section\"\n", 1),
    ];
    for (src, expected) in cases {
        let (line, _) = syntax_line(parse(src).unwrap_err());
        assert_eq!(line, expected, "{src}");
    }
}

#[test]
fn comments_and_quoted_hashes() {
    let src = "# header\n[manifold]  # trailing\nname = \"m#1\"\ndim = 2\ncoords = \"x, y\"\n[metric]\ng_11 = \"exp(x)\" # positive\ng_22 = \"1\"\n";
    let file = parse(src).unwrap();
    assert_eq!(file.name, "m#1");
    file.build(&[]).unwrap();
}

#[test]
fn undeclared_coordinate_in_expression() {
    let src = "[manifold]\nname = \"m\"\ndim = 2\ncoords = \"x, y\"\n[metric]\ng_11 = \"1\"\ng_22 = \"w^2\"\n";
    let err = parse(src).unwrap().build(&[]).unwrap_err();
    assert!(err.to_string().contains(":7:"), "{err}");
}

#[test]
fn parameter_overrides() {
    let file = load("sphere2");
    let scal = |ov: &[(String, f64)]| {
        let model = file.build(ov).unwrap();
        model.geometry.at(&[1.0, 0.5]).unwrap().scalar_curvature()
    };
    assert!((scal(&[]) - 0.5).abs() < 1e-12);
    assert!((scal(&[("r".into(), 3.0)]) - 2.0 / 9.0).abs() < 1e-12);
    assert!(file.build(&[("nope".into(), 1.0)]).is_err());
}

#[test]
fn lcs3_sampling_stays_off_the_singular_plane() {
    let file = load("lcs3-example");
    let model = file.build(&[]).unwrap();
    let points = sample_points(model.geometry.manifold(), &file.sampling).unwrap();
    assert_eq!(points.len(), 27 + 8);
    assert!(points.iter().all(|p| p.0[2].abs() >= 1.0 && p.0[2] <= 4.0));
}

#[test]
fn sampling_is_deterministic_per_seed() {
    let file = load("lcs3-example");
    let model = file.build(&[]).unwrap();
    let mut spec = file.sampling.clone();
    spec.seed = 42;
    let a = sample_points(model.geometry.manifold(), &spec).unwrap();
    let b = sample_points(model.geometry.manifold(), &spec).unwrap();
    assert_eq!(a, b);
    spec.seed = 43;
    let c = sample_points(model.geometry.manifold(), &spec).unwrap();
    assert_eq!(a[..27], c[..27]);
    assert_ne!(a[27..], c[27..]);
}

#[test]
fn window_straddling_the_singular_plane_is_rejected() {
    let file = load("lcs3-example");
    let model = file.build(&[]).unwrap();
    for window in [(-1.0, 2.0), (-1.0, 1.0)] {
        let mut spec = file.sampling.clone();
        spec.ranges[2] = window;
        let err = sample_points(model.geometry.manifold(), &spec).unwrap_err();
        assert!(matches!(err, Error::Sampling(_)), "{err}");
    }
}
