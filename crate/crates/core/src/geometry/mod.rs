//! Charts, metrics and frames, and the curvature pipeline built on them.
//!
//! [`Geometry::new`] derives the inverse metric, the Christoffel symbols, the
//! Ricci tensor and the scalar curvature symbolically (with exact partial
//! derivatives of each); [`Geometry::at`] evaluates everything at one point
//! into a [`Local`] snapshot on which the pointwise operators act.
//!
//! Conventions: `R(X,Y)Z = ∇_X∇_Y Z - ∇_Y∇_X Z - ∇_[X,Y] Z`,
//! `S(X,Y) = trace(Z -> R(Z,X)Y)`, `Δf = trace_g Hess f`.

mod derivative;
mod frame;
mod local;

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::expr::{sum, Expr, Rational, Symbols};
use crate::tensor::{Slot, TensorField};

pub use derivative::HessianPackage;
pub use frame::FrameAt;
pub use local::Local;

/// Points closer than this to a domain constraint's zero set are rejected.
pub const DOMAIN_MARGIN: f64 = 1e-8;

/// A point of the chart: one value per coordinate.
#[derive(Clone, Debug, PartialEq)]
pub struct Point(pub Vec<f64>);

impl Point {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for Point {
    fn from(v: Vec<f64>) -> Point {
        Point(v)
    }
}

/// Frame vectors as coordinate-component expressions plus the constant gram
/// matrix they are declared to have (diagonal signature entries).
#[derive(Clone, Debug)]
pub struct Frame {
    /// `vectors[a][i]` is the i-th coordinate component of frame vector `a`.
    pub vectors: Vec<Vec<Expr>>,
    pub signature: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct ChartManifold {
    name: String,
    symbols: Symbols,
    domain: Vec<Expr>,
    metric: Vec<Expr>,
    frame: Option<Frame>,
    scalars: BTreeMap<String, Expr>,
}

impl ChartManifold {
    /// `metric` is the full `n x n` matrix in row-major order; it must be
    /// symmetric entry by entry.
    pub fn new(name: &str, symbols: Symbols, metric: Vec<Expr>) -> Result<ChartManifold> {
        let n = symbols.coords().len();
        if n < 2 {
            return Err(Error::Shape(alloc::format!("dimension {n} < 2")));
        }
        if metric.len() != n * n {
            return Err(Error::Shape(alloc::format!("{} metric entries for dimension {n}", metric.len())));
        }
        for i in 0..n {
            for j in i + 1..n {
                if metric[i * n + j] != metric[j * n + i] {
                    return Err(Error::AsymmetricMetric { i, j });
                }
            }
        }
        Ok(ChartManifold {
            name: name.to_string(),
            symbols,
            domain: Vec::new(),
            metric,
            frame: None,
            scalars: BTreeMap::new(),
        })
    }

    pub fn with_domain(mut self, constraints: Vec<Expr>) -> ChartManifold {
        self.domain = constraints;
        self
    }

    pub fn with_frame(mut self, frame: Frame) -> Result<ChartManifold> {
        let n = self.dim();
        if frame.vectors.len() != n || frame.vectors.iter().any(|v| v.len() != n) || frame.signature.len() != n {
            return Err(Error::Shape(alloc::format!("frame must have {n} vectors of {n} components")));
        }
        self.frame = Some(frame);
        Ok(self)
    }

    pub fn with_scalar(mut self, name: &str, f: Expr) -> ChartManifold {
        self.scalars.insert(name.to_string(), f);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.symbols.coords().len()
    }

    pub fn symbols(&self) -> &Symbols {
        &self.symbols
    }

    pub fn coord_names(&self) -> Vec<&str> {
        self.symbols.coords().iter().map(|c| &**c).collect()
    }

    pub fn parse(&self, source: &str) -> Result<Expr> {
        Ok(self.symbols.parse(source)?)
    }

    pub fn metric(&self) -> &[Expr] {
        &self.metric
    }

    pub fn domain(&self) -> &[Expr] {
        &self.domain
    }

    pub fn frame(&self) -> Option<&Frame> {
        self.frame.as_ref()
    }

    pub fn scalar(&self, name: &str) -> Option<&Expr> {
        self.scalars.get(name)
    }

    /// Checks arity and every domain constraint (with [`DOMAIN_MARGIN`]).
    pub fn check_point(&self, p: &[f64]) -> Result<()> {
        if p.len() != self.dim() {
            return Err(Error::Shape(alloc::format!("point has {} coordinates, chart has {}", p.len(), self.dim())));
        }
        for c in &self.domain {
            let v = c.eval(p)?;
            if libm::fabs(v) <= DOMAIN_MARGIN {
                return Err(Error::OutsideDomain { constraint: c.to_source(), value: v });
            }
        }
        Ok(())
    }
}

fn determinant(m: &[Expr], n: usize) -> Expr {
    if n == 1 {
        return m[0].clone();
    }
    let mut acc = Expr::zero();
    for col in 0..n {
        if m[col].is_zero() {
            continue;
        }
        let minor = minor(m, n, 0, col);
        let term = &m[col] * determinant(&minor, n - 1);
        acc = if col % 2 == 0 { acc + term } else { acc - term };
    }
    acc
}

fn minor(m: &[Expr], n: usize, row: usize, col: usize) -> Vec<Expr> {
    let mut out = Vec::with_capacity((n - 1) * (n - 1));
    for i in (0..n).filter(|i| *i != row) {
        for j in (0..n).filter(|j| *j != col) {
            out.push(m[i * n + j].clone());
        }
    }
    out
}

/// Adjugate over determinant, entry by entry.
fn symbolic_inverse(m: &[Expr], n: usize) -> Vec<Expr> {
    let det = determinant(m, n).simplify();
    let mut inv = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            // inv[i][j] = cofactor(j, i) / det
            let c = determinant(&minor(m, n, j, i), n - 1);
            let c = if (i + j) % 2 == 0 { c } else { -c };
            inv.push((c / &det).simplify());
        }
    }
    inv
}

/// Symbolic data of a frame: component expressions and the gram matrix.
#[derive(Clone, Debug)]
pub(crate) struct FrameFields {
    /// Container with `comps[i * n + a] = E_a^i`, partials included.
    vectors: TensorField,
    gram: TensorField,
    signature: Vec<f64>,
}

/// Symbolic curvature data of a chart manifold.
#[derive(Clone, Debug)]
pub struct Geometry {
    manifold: ChartManifold,
    metric: TensorField,
    inverse: Vec<Expr>,
    christoffel: TensorField,
    ricci: TensorField,
    scalar: TensorField,
    frame: Option<FrameFields>,
}

impl Geometry {
    pub fn new(manifold: ChartManifold) -> Result<Geometry> {
        let n = manifold.dim();
        let metric = TensorField::new(n, &[Slot::Down, Slot::Down], manifold.metric.clone())?;
        let inverse = symbolic_inverse(metric.components(), n);
        let dg = |m: usize, i: usize, j: usize| metric.partial(m, i * n + j).clone();

        let half = Expr::rational(Rational::new(1, 2));
        let mut gamma = Vec::with_capacity(n * n * n);
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let terms = (0..n).map(|l| &inverse[k * n + l] * (dg(i, j, l) + dg(j, i, l) - dg(l, i, j)));
                    gamma.push((&half * sum(terms)).simplify());
                }
            }
        }
        let christoffel = TensorField::new(n, &[Slot::Up, Slot::Down, Slot::Down], gamma)?;

        let g = |k: usize, i: usize, j: usize| &christoffel.components()[(k * n + i) * n + j];
        let dgamma = |m: usize, k: usize, i: usize, j: usize| christoffel.partial(m, (k * n + i) * n + j);
        let mut ricci = Vec::with_capacity(n * n);
        for j in 0..n {
            for k in 0..n {
                let mut terms = Vec::new();
                for i in 0..n {
                    terms.push(dgamma(i, i, j, k) - dgamma(j, i, i, k));
                    for m in 0..n {
                        terms.push(g(m, j, k) * g(i, i, m) - g(m, i, k) * g(i, j, m));
                    }
                }
                ricci.push(sum(terms).simplify());
            }
        }
        let ricci = TensorField::new(n, &[Slot::Down, Slot::Down], ricci)?;
        let scalar = sum((0..n * n).map(|c| &inverse[c] * &ricci.components()[c]));
        let scalar = TensorField::scalar(n, scalar);

        let frame = match manifold.frame() {
            None => None,
            Some(fr) => {
                let mut comps = Vec::with_capacity(n * n);
                for i in 0..n {
                    for a in 0..n {
                        comps.push(fr.vectors[a][i].clone());
                    }
                }
                let vectors = TensorField::new(n, &[Slot::Up, Slot::Down], comps)?;
                let e = |i: usize, a: usize| &vectors.components()[i * n + a];
                let mut gram = Vec::with_capacity(n * n);
                for a in 0..n {
                    for b in 0..n {
                        let terms = (0..n * n).map(|c| e(c / n, a) * &metric.components()[c] * e(c % n, b));
                        gram.push(sum(terms));
                    }
                }
                let gram = TensorField::new(n, &[Slot::Down, Slot::Down], gram)?;
                Some(FrameFields { vectors, gram, signature: fr.signature.clone() })
            }
        };

        Ok(Geometry { manifold, metric, inverse, christoffel, ricci, scalar, frame })
    }

    pub fn manifold(&self) -> &ChartManifold {
        &self.manifold
    }

    pub fn dim(&self) -> usize {
        self.manifold.dim()
    }

    pub fn metric_field(&self) -> &TensorField {
        &self.metric
    }

    /// Inverse metric expressions, row-major.
    pub fn inverse_metric(&self) -> &[Expr] {
        &self.inverse
    }

    pub fn christoffel_field(&self) -> &TensorField {
        &self.christoffel
    }

    pub fn ricci_field(&self) -> &TensorField {
        &self.ricci
    }

    pub fn scalar_field(&self) -> &TensorField {
        &self.scalar
    }

    pub fn has_frame(&self) -> bool {
        self.frame.is_some()
    }

    /// Evaluates the curvature pipeline at `p`.
    pub fn at(&self, p: &[f64]) -> Result<Local<'_>> {
        Local::new(self, p)
    }
}
