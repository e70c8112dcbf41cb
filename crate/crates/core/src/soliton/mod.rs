//! Almost η-Ricci and η-Einstein solitons `(g, ξ, λ, μ)`: residuals,
//! pointwise fitting of `(λ, μ)`, classification, curvature-condition
//! theorems, and the gradient-case identities and bounds.

mod conditions;
mod gradient;
mod lcs_identities;

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::expr::{sum, Expr};
use crate::geometry::{Geometry, Local, Point};
use crate::tensor::{for_each_index, Basis, Slot, TensorField, TensorValue};

pub use conditions::{condition_r_dot_s, condition_s_dot_r, r_dot_s_tensor, s_dot_r_tensor, ConditionOutcome};
pub use gradient::{
    auxiliary_identities, bochner_residual, gradient_residuals, ricci_norm_bounds, trace_identity, Bounds,
};
pub use lcs_identities::{
    check_identities, gradient_constraint_residual, lcs_gradient_constraints, nabla_s_conditions, GradientConstraints,
    NablaSReport, TheoremCheck,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    /// `L_ξ g + 2S + 2λg + 2μ η⊗η = 0`.
    EtaRicci,
    /// `L_ξ g + 2S + (2λ - scal)g + 2μ η⊗η = 0`.
    EtaEinstein,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    Steady,
    Shrinking,
    Expanding,
    Mixed,
}

/// Sign of `λ` over a sample window.
pub fn classify(lambdas: &[f64], tol: f64) -> Classification {
    if lambdas.iter().all(|l| libm::fabs(*l) < tol) {
        Classification::Steady
    } else if lambdas.iter().all(|l| *l < -tol) {
        Classification::Shrinking
    } else if lambdas.iter().all(|l| *l > tol) {
        Classification::Expanding
    } else {
        Classification::Mixed
    }
}

/// Three-valued outcome of checking a theorem on samples.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Hypothesis and conclusion both hold.
    HoldsVerified,
    /// Hypothesis holds but the conclusion does not: a convention or
    /// derivation mismatch, never new mathematics.
    HoldsFailed,
    /// Hypothesis fails somewhere; the theorem says nothing.
    Vacuous,
}

impl Verdict {
    pub fn decide(hypothesis: &[f64], conclusion: &[f64], tol: f64) -> Verdict {
        let below = |v: &[f64]| crate::tensor::max_abs(v) < tol;
        match (below(hypothesis), below(conclusion)) {
            (false, _) => Verdict::Vacuous,
            (true, true) => Verdict::HoldsVerified,
            (true, false) => Verdict::HoldsFailed,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::HoldsVerified => "holds, conclusion verified",
            Verdict::HoldsFailed => "holds, conclusion FAILED",
            Verdict::Vacuous => "vacuous",
        }
    }
}

/// A vector field with soliton functions, plus symbolic data derived from
/// them. With a potential `f`, `ξ = grad f` is expected.
#[derive(Clone, Debug)]
pub struct SolitonParams {
    kind: Kind,
    xi: TensorField,
    eta: TensorField,
    lambda: TensorField,
    mu: TensorField,
    /// `g(ξ, ξ)` with partials.
    xi_norm: TensorField,
    potential: Option<Potential>,
}

#[derive(Clone, Debug)]
struct Potential {
    f: Expr,
    /// `Hess f`, covariant, with partials.
    hessian: TensorField,
    /// `Δf` with partials.
    laplacian: TensorField,
}

fn lower_vector(geo: &Geometry, xi: &[Expr]) -> Vec<Expr> {
    let n = geo.dim();
    let g = geo.metric_field().components();
    (0..n).map(|i| sum((0..n).map(|j| &g[i * n + j] * &xi[j]))).collect()
}

impl SolitonParams {
    pub fn new(geo: &Geometry, xi: Vec<Expr>, lambda: Expr, mu: Expr, kind: Kind) -> Result<SolitonParams> {
        let n = geo.dim();
        if xi.len() != n {
            return Err(Error::Shape(alloc::format!("xi has {} components, chart has {n}", xi.len())));
        }
        let eta = lower_vector(geo, &xi);
        let xi_norm = sum((0..n).map(|i| &xi[i] * &eta[i]));
        Ok(SolitonParams {
            kind,
            xi: TensorField::vector(xi),
            eta: TensorField::covector(eta),
            lambda: TensorField::scalar(n, lambda),
            mu: TensorField::scalar(n, mu),
            xi_norm: TensorField::scalar(n, xi_norm),
            potential: None,
        })
    }

    /// Gradient soliton with `ξ := grad f`.
    pub fn gradient(geo: &Geometry, f: Expr, lambda: Expr, mu: Expr, kind: Kind) -> Result<SolitonParams> {
        let n = geo.dim();
        let gi = geo.inverse_metric();
        let df: Vec<Expr> = (0..n).map(|j| f.diff(j)).collect();
        let xi = (0..n).map(|i| sum((0..n).map(|j| &gi[i * n + j] * &df[j])).simplify()).collect();
        Ok(SolitonParams::new(geo, xi, lambda, mu, kind)?.attach_potential(geo, f))
    }

    /// Declares `f` as a potential of the already given `ξ`; verified by
    /// [`SolitonParams::check_potential`].
    pub fn with_potential(self, geo: &Geometry, f: Expr) -> SolitonParams {
        self.attach_potential(geo, f)
    }

    fn attach_potential(mut self, geo: &Geometry, f: Expr) -> SolitonParams {
        let n = geo.dim();
        let gam = geo.christoffel_field().components();
        let df: Vec<Expr> = (0..n).map(|j| f.diff(j)).collect();
        let mut hess = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let conn = sum((0..n).map(|k| &gam[(k * n + i) * n + j] * &df[k]));
                hess.push(df[j].diff(i) - conn);
            }
        }
        let hessian = TensorField::new(n, &[Slot::Down, Slot::Down], hess).expect("n x n components");
        let gi = geo.inverse_metric();
        let lap = sum((0..n * n).map(|c| &gi[c] * &hessian.components()[c]));
        self.potential = Some(Potential { f, hessian, laplacian: TensorField::scalar(n, lap) });
        self
    }

    /// `grad f = ξ` at every point, to `tol`.
    pub fn check_potential(&self, geo: &Geometry, points: &[Point], tol: f64) -> Result<()> {
        let pot = self.potential.as_ref().ok_or(Error::PotentialAbsent)?;
        for p in points {
            let loc = geo.at(p.as_slice())?;
            let h = loc.hessian_package(&pot.f)?;
            let xi = self.xi.value_at(p.as_slice())?;
            let residual = loc.preferred(&h.gradient.try_sub(&xi)?).max_abs();
            if !(residual < tol) {
                return Err(Error::NotGradient { residual });
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn xi(&self) -> &TensorField {
        &self.xi
    }

    pub fn eta(&self) -> &TensorField {
        &self.eta
    }

    pub fn lambda(&self) -> &Expr {
        &self.lambda.components()[0]
    }

    pub fn mu(&self) -> &Expr {
        &self.mu.components()[0]
    }

    pub fn potential(&self) -> Option<&Expr> {
        self.potential.as_ref().map(|p| &p.f)
    }

    pub fn has_potential(&self) -> bool {
        self.potential.is_some()
    }

    /// Numeric values at a point.
    pub fn at(&self, loc: &Local<'_>) -> Result<ParamsAt> {
        let p = loc.point();
        let scalar = |f: &TensorField| -> Result<f64> { Ok(f.value_at(p)?.data()[0]) };
        Ok(ParamsAt {
            xi: self.xi.value_at(p)?,
            eta: self.eta.value_at(p)?,
            lambda: scalar(&self.lambda)?,
            mu: scalar(&self.mu)?,
            dlambda: self.lambda.partials_at(p)?,
            dmu: self.mu.partials_at(p)?,
            xi_norm: scalar(&self.xi_norm)?,
            dxi_norm: self.xi_norm.partials_at(p)?,
        })
    }

    /// `L_ξ g + 2S + 2λg + 2μ η⊗η` (or the η-Einstein variant), coordinate
    /// basis.
    pub fn residual_at(&self, loc: &Local<'_>) -> Result<TensorValue> {
        let at = self.at(loc)?;
        let lie = loc.lie_derivative_metric(&self.xi)?;
        let g_coeff = match self.kind {
            Kind::EtaRicci => 2.0 * at.lambda,
            Kind::EtaEinstein => 2.0 * at.lambda - loc.scalar_curvature(),
        };
        let (g, s) = (loc.metric(), loc.ricci());
        Ok(TensorValue::from_fn(loc.dim(), &[Slot::Down, Slot::Down], Basis::Coordinate, |ij| {
            lie.get(ij)
                + 2.0 * s.get(ij)
                + g_coeff * g.get(ij)
                + 2.0 * at.mu * at.eta.get(&[ij[0]]) * at.eta.get(&[ij[1]])
        }))
    }

    /// Least-squares `(λ, μ)` over every component of the soliton equation
    /// in the preferred basis. The returned residual is the max-abs
    /// component left over with the fitted values.
    pub fn fit_at(&self, loc: &Local<'_>) -> Result<Fit> {
        let n = loc.dim();
        let at = self.at(loc)?;
        let lie = loc.lie_derivative_metric(&self.xi)?;
        let mut rhs = lie.try_add(&loc.ricci().scaled(2.0))?;
        if self.kind == Kind::EtaEinstein {
            rhs = rhs.try_sub(&loc.metric().scaled(loc.scalar_curvature()))?;
        }
        let eta2 = TensorValue::from_fn(n, &[Slot::Down, Slot::Down], Basis::Coordinate, |ij| {
            at.eta.get(&[ij[0]]) * at.eta.get(&[ij[1]])
        });
        let a = loc.preferred(&loc.metric().scaled(2.0));
        let b = loc.preferred(&eta2.scaled(2.0));
        let c = loc.preferred(&rhs);
        // minimise |λA + μB + C|²
        let dot = |u: &TensorValue, v: &TensorValue| u.data().iter().zip(v.data()).map(|(x, y)| x * y).sum::<f64>();
        let (aa, ab, bb) = (dot(&a, &a), dot(&a, &b), dot(&b, &b));
        let (ac, bc) = (dot(&a, &c), dot(&b, &c));
        let det = aa * bb - ab * ab;
        if !(libm::fabs(det) > 1e-12 * aa * bb) {
            return Err(Error::SingularNormalEquations);
        }
        let lambda = (-ac * bb + bc * ab) / det;
        let mu = (-bc * aa + ac * ab) / det;
        let res = a.scaled(lambda).try_add(&b.scaled(mu))?.try_add(&c)?;
        Ok(Fit { lambda, mu, residual: res.max_abs() })
    }
}

/// Soliton data at a point, coordinate basis.
#[derive(Clone, Debug)]
pub struct ParamsAt {
    pub xi: TensorValue,
    pub eta: TensorValue,
    pub lambda: f64,
    pub mu: f64,
    pub dlambda: TensorValue,
    pub dmu: TensorValue,
    /// `|ξ|² = g(ξ, ξ)`.
    pub xi_norm: f64,
    pub dxi_norm: TensorValue,
}

impl ParamsAt {
    /// `ξ(h)` for a differential `dh`.
    pub fn along_xi(&self, dh: &TensorValue) -> f64 {
        let mut acc = 0.0;
        for_each_index(self.xi.dim(), 1, |i| acc += self.xi.get(i) * dh.get(i));
        acc
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Fit {
    pub lambda: f64,
    pub mu: f64,
    pub residual: f64,
}

/// Cross-check of [`SolitonParams::fit_at`] for a quasi-Einstein Ricci
/// tensor `S = -(α+λ)g - (α+μ)η⊗η`: `λ = -α - S(v,v)/g(v,v)` for a
/// spacelike `v` orthogonal to `ξ`, then `μ = λ - S(ξ,ξ)`.
pub fn shortcut_fit(loc: &Local<'_>, xi: &[f64], alpha: f64) -> Option<(f64, f64)> {
    let n = loc.dim();
    let eta: Vec<f64> = (0..n).map(|i| (0..n).map(|j| loc.metric().get(&[i, j]) * xi[j]).sum()).collect();
    let v = spacelike_orthogonal(loc, xi, &eta)?;
    let lambda = -alpha - loc.ricci_apply(&v, &v) / loc.inner(&v, &v);
    Some((lambda, lambda - loc.ricci_apply(xi, xi)))
}

/// The coordinate direction with `η` projected out that has the largest
/// positive length.
pub(crate) fn spacelike_orthogonal(loc: &Local<'_>, xi: &[f64], eta: &[f64]) -> Option<Vec<f64>> {
    let n = loc.dim();
    let xi_norm = loc.inner(xi, xi);
    if !(libm::fabs(xi_norm) > 1e-12) {
        return None;
    }
    let mut best: Option<(f64, Vec<f64>)> = None;
    for e in 0..n {
        // v = e - η(e)/|ξ|² ξ, so η(v) = 0
        let v: Vec<f64> = (0..n).map(|i| f64::from(u8::from(i == e)) - eta[e] / xi_norm * xi[i]).collect();
        let len = loc.inner(&v, &v);
        if len > best.as_ref().map_or(0.0, |b| b.0) {
            best = Some((len, v));
        }
    }
    best.map(|b| b.1)
}
