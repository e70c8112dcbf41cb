#![allow(dead_code)]

use concircle_core::geometry::Frame;
use concircle_core::{ChartManifold, Expr, Geometry, Symbols};

pub fn parse_all(symbols: &Symbols, src: &[&str]) -> Vec<Expr> {
    src.iter().map(|s| symbols.parse(s).unwrap()).collect()
}

pub fn lcs3_manifold() -> ChartManifold {
    let s = Symbols::new(&["x", "y", "z"]);
    let g = parse_all(&s, &["z^(-4)", "0", "0", "0", "z^(-4)", "0", "0", "0", "-1"]);
    let frame = Frame {
        vectors: vec![
            parse_all(&s, &["z^2", "0", "0"]),
            parse_all(&s, &["0", "z^2", "0"]),
            parse_all(&s, &["0", "0", "1"]),
        ],
        signature: vec![1.0, 1.0, -1.0],
    };
    let domain = parse_all(&s, &["z"]);
    ChartManifold::new("lcs3-example", s, g).unwrap().with_domain(domain).with_frame(frame).unwrap()
}

pub fn lcs3() -> Geometry {
    Geometry::new(lcs3_manifold()).unwrap()
}

pub fn sphere(r: i64) -> Geometry {
    let s = Symbols::new(&["theta", "phi"]).with_constant("r", Expr::int(r));
    let g = parse_all(&s, &["r^2", "0", "0", "r^2*sin(theta)^2"]);
    let domain = parse_all(&s, &["sin(theta)"]);
    Geometry::new(ChartManifold::new("sphere2", s, g).unwrap().with_domain(domain)).unwrap()
}

/// A Lorentzian metric with an off-diagonal entry and no symmetry, used to
/// stress the curvature pipeline.
pub fn generic3() -> Geometry {
    let s = Symbols::new(&["x", "y", "z"]);
    let g = parse_all(
        &s,
        &["exp(z)", "sin(x)/4", "0", "sin(x)/4", "1 + y^2", "0", "0", "0", "-1 - x^2*z^2/2"],
    );
    Geometry::new(ChartManifold::new("generic3", s, g).unwrap()).unwrap()
}

/// Finite-difference oracle: metric values straight from the expressions,
/// inverted by Gauss-Jordan elimination, differentiated by central
/// differences.
pub struct Oracle<'a> {
    pub metric: &'a [Expr],
    pub n: usize,
}

impl Oracle<'_> {
    pub fn g(&self, p: &[f64]) -> Vec<f64> {
        self.metric.iter().map(|e| e.eval(p).unwrap()).collect()
    }

    pub fn ginv(&self, p: &[f64]) -> Vec<f64> {
        gauss_jordan_inverse(self.n, &self.g(p))
    }

    fn dg(&self, p: &[f64], m: usize, h: f64) -> Vec<f64> {
        let (mut a, mut b) = (p.to_vec(), p.to_vec());
        a[m] += h;
        b[m] -= h;
        self.g(&a).iter().zip(self.g(&b)).map(|(u, v)| (u - v) / (2.0 * h)).collect()
    }

    /// `[k][i][j]` flattened.
    pub fn christoffel(&self, p: &[f64], h: f64) -> Vec<f64> {
        let n = self.n;
        let gi = self.ginv(p);
        let dg: Vec<Vec<f64>> = (0..n).map(|m| self.dg(p, m, h)).collect();
        let mut out = vec![0.0; n * n * n];
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut v = 0.0;
                    for l in 0..n {
                        v += gi[k * n + l] * (dg[i][j * n + l] + dg[j][i * n + l] - dg[l][i * n + j]);
                    }
                    out[(k * n + i) * n + j] = 0.5 * v;
                }
            }
        }
        out
    }

    /// `[l][i][j][k]` flattened, from differences of the oracle Christoffels.
    pub fn riemann(&self, p: &[f64], h: f64) -> Vec<f64> {
        let n = self.n;
        let gam = self.christoffel(p, h);
        let dgam: Vec<Vec<f64>> = (0..n)
            .map(|m| {
                let (mut a, mut b) = (p.to_vec(), p.to_vec());
                a[m] += h;
                b[m] -= h;
                let ga = self.christoffel(&a, h);
                let gb = self.christoffel(&b, h);
                ga.iter().zip(gb).map(|(u, v)| (u - v) / (2.0 * h)).collect()
            })
            .collect();
        let gm = |k: usize, i: usize, j: usize| gam[(k * n + i) * n + j];
        let dgm = |m: usize, k: usize, i: usize, j: usize| dgam[m][(k * n + i) * n + j];
        let mut out = vec![0.0; n.pow(4)];
        for l in 0..n {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let mut v = dgm(i, l, j, k) - dgm(j, l, i, k);
                        for m in 0..n {
                            v += gm(m, j, k) * gm(l, i, m) - gm(m, i, k) * gm(l, j, m);
                        }
                        out[((l * n + i) * n + j) * n + k] = v;
                    }
                }
            }
        }
        out
    }
}

pub fn gauss_jordan_inverse(n: usize, a: &[f64]) -> Vec<f64> {
    let mut m: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut row = a[i * n..(i + 1) * n].to_vec();
            row.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            row
        })
        .collect();
    for c in 0..n {
        let piv = (c..n).max_by(|&x, &y| m[x][c].abs().total_cmp(&m[y][c].abs())).unwrap();
        m.swap(c, piv);
        let d = m[c][c];
        for v in m[c].iter_mut() {
            *v /= d;
        }
        for r in 0..n {
            if r != c {
                let f = m[r][c];
                let pivot_row = m[c].clone();
                for (v, pv) in m[r].iter_mut().zip(pivot_row) {
                    *v -= f * pv;
                }
            }
        }
    }
    m.into_iter().flat_map(|row| row[n..].to_vec()).collect()
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + b.abs())
}

/// 35 points over x, y in [-1, 1], z in [1, 4]: a 3x3x3 grid plus eight
/// scattered interior points.
pub fn lcs3_points() -> Vec<[f64; 3]> {
    let mut pts = Vec::new();
    for &x in &[-1.0, 0.0, 1.0] {
        for &y in &[-1.0, 0.0, 1.0] {
            for &z in &[1.0, 2.5, 4.0] {
                pts.push([x, y, z]);
            }
        }
    }
    for k in 0..8 {
        let t = k as f64 / 7.0;
        pts.push([0.3 - 0.5 * t, 0.9 * t - 0.2, 1.0 + 3.0 * (0.137 + 0.71 * t).fract()]);
    }
    pts
}

pub fn lcs3_sample() -> Vec<concircle_core::Point> {
    lcs3_points().into_iter().map(|p| concircle_core::Point(p.to_vec())).collect()
}

/// `τ²(dx² + dy²)/y² - dτ²`: a warped product over the hyperbolic plane,
/// flat as a whole.
pub fn milne3() -> Geometry {
    let s = Symbols::new(&["x", "y", "tau"]);
    let g = parse_all(&s, &["tau^2/y^2", "0", "0", "0", "tau^2/y^2", "0", "0", "0", "-1"]);
    let frame = Frame {
        vectors: vec![
            parse_all(&s, &["y/tau", "0", "0"]),
            parse_all(&s, &["0", "y/tau", "0"]),
            parse_all(&s, &["0", "0", "1"]),
        ],
        signature: vec![1.0, 1.0, -1.0],
    };
    let domain = parse_all(&s, &["y", "tau"]);
    Geometry::new(ChartManifold::new("milne3", s, g).unwrap().with_domain(domain).with_frame(frame).unwrap()).unwrap()
}

pub fn points(raw: &[[f64; 3]]) -> Vec<concircle_core::Point> {
    raw.iter().map(|p| concircle_core::Point(p.to_vec())).collect()
}

/// `e^{2t}(dx² + dy²) - dt²` with the orthonormal frame.
pub fn desitter3() -> Geometry {
    let s = Symbols::new(&["x", "y", "t"]);
    let g = parse_all(&s, &["exp(2*t)", "0", "0", "0", "exp(2*t)", "0", "0", "0", "-1"]);
    let frame = Frame {
        vectors: vec![
            parse_all(&s, &["exp(-t)", "0", "0"]),
            parse_all(&s, &["0", "exp(-t)", "0"]),
            parse_all(&s, &["0", "0", "1"]),
        ],
        signature: vec![1.0, 1.0, -1.0],
    };
    Geometry::new(ChartManifold::new("desitter3", s, g).unwrap().with_frame(frame).unwrap()).unwrap()
}

pub fn euclidean3() -> Geometry {
    let s = Symbols::new(&["x", "y", "z"]);
    let g = parse_all(&s, &["1", "0", "0", "0", "1", "0", "0", "0", "1"]);
    Geometry::new(ChartManifold::new("euclidean3", s, g).unwrap()).unwrap()
}
