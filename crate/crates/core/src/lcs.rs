//! Lorentzian concircular structures: extraction of `(η, φ, α, ρ)` from a
//! unit timelike vector field and pointwise residuals of the structure
//! identities.
//!
//! Every residual is the largest absolute component of a tensor that must
//! vanish, taken in the frame when the manifold declares one.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::expr::{sum, Expr};
use crate::geometry::{Geometry, Local, Point};
use crate::report::Report;
use crate::tensor::{for_each_index, Basis, Slot, TensorField, TensorValue};

#[derive(Clone, Debug)]
pub struct LcsStructure {
    xi: TensorField,
    eta: TensorField,
    phi: TensorField,
    alpha: TensorField,
    rho: TensorField,
    xi_alpha: TensorField,
    derived_alpha: Expr,
}

/// `∇_i ξ^k = ∂_i ξ^k + Γ^k_ij ξ^j` as expressions, `[i * n + k]`.
fn nabla_vector_symbolic(geo: &Geometry, xi: &TensorField) -> Vec<Expr> {
    let n = geo.dim();
    let gam = geo.christoffel_field().components();
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for k in 0..n {
            let conn = (0..n).map(|j| &gam[(k * n + i) * n + j] * &xi.components()[j]);
            out.push(xi.partial(i, k) + sum(conn));
        }
    }
    out
}

impl LcsStructure {
    /// Builds the structure from `ξ` and checks, at every point, that `ξ` is
    /// unit timelike, that `α = trace(∇ξ)/(n-1)` is nonzero and that
    /// `∇ξ = α(I + η⊗ξ)`. A declared `α` must agree with the derived one and
    /// then replaces it.
    pub fn derive(
        geo: &Geometry,
        xi: Vec<Expr>,
        declared_alpha: Option<Expr>,
        points: &[Point],
        tol: f64,
    ) -> Result<LcsStructure> {
        let n = geo.dim();
        if xi.len() != n {
            return Err(Error::Shape(alloc::format!("xi has {} components, chart has {n}", xi.len())));
        }
        let xi = TensorField::vector(xi);
        let g = geo.metric_field().components();
        let eta: Vec<Expr> =
            (0..n).map(|i| sum((0..n).map(|j| &g[i * n + j] * &xi.components()[j]))).collect();
        let mut phi = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let outer = &xi.components()[i] * &eta[j];
                phi.push(if i == j { Expr::one() + outer } else { outer });
            }
        }
        let nabla = nabla_vector_symbolic(geo, &xi);
        let trace = sum((0..n).map(|k| nabla[k * n + k].clone()));
        let derived_alpha = (trace / Expr::int(n as i64 - 1)).simplify();
        let alpha = declared_alpha.clone().unwrap_or_else(|| derived_alpha.clone());
        let alpha = TensorField::scalar(n, alpha);
        let xi_alpha = alpha.components()[0].directional(xi.components());
        let rho = TensorField::scalar(n, -xi_alpha.clone());
        let s = LcsStructure {
            eta: TensorField::covector(eta),
            phi: TensorField::new(n, &[Slot::Up, Slot::Down], phi)?,
            xi_alpha: TensorField::scalar(n, xi_alpha),
            xi,
            alpha,
            rho,
            derived_alpha,
        };

        for p in points {
            let loc = geo.at(p.as_slice())?;
            let at = s.at(&loc)?;
            let norm = at.xi_xi(&loc);
            if libm::fabs(norm + 1.0) > tol {
                return Err(Error::NotUnitTimelike { value: norm });
            }
            let derived = s.derived_alpha.eval(p.as_slice())?;
            if libm::fabs(derived) <= tol {
                return Err(Error::AlphaVanishes { value: derived });
            }
            if declared_alpha.is_some() {
                let residual = libm::fabs(at.alpha - derived);
                if residual > tol * (1.0 + libm::fabs(derived)) {
                    return Err(Error::AlphaMismatch { residual });
                }
            }
            let residual = loc.preferred(&at.concircular_defect(&loc)).max_abs();
            if !(residual <= tol) {
                return Err(Error::NotConcircular { residual });
            }
        }
        Ok(s)
    }

    /// Replaces `φ` without re-deriving anything else. Used to confirm that
    /// the axiom checks notice a damaged structure.
    pub fn with_phi(mut self, phi: Vec<Expr>) -> Result<LcsStructure> {
        self.phi = TensorField::new(self.xi.dim(), &[Slot::Up, Slot::Down], phi)?;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.xi.dim()
    }

    pub fn xi(&self) -> &TensorField {
        &self.xi
    }

    pub fn eta(&self) -> &TensorField {
        &self.eta
    }

    pub fn phi(&self) -> &TensorField {
        &self.phi
    }

    pub fn alpha(&self) -> &Expr {
        &self.alpha.components()[0]
    }

    /// `trace(∇ξ)/(n-1)`, regardless of any declared value.
    pub fn derived_alpha(&self) -> &Expr {
        &self.derived_alpha
    }

    pub fn rho(&self) -> &Expr {
        &self.rho.components()[0]
    }

    /// `ξ(α)`.
    pub fn xi_alpha(&self) -> &Expr {
        &self.xi_alpha.components()[0]
    }

    pub fn xi_alpha_field(&self) -> &TensorField {
        &self.xi_alpha
    }

    pub fn alpha_field(&self) -> &TensorField {
        &self.alpha
    }

    pub fn at(&self, loc: &Local<'_>) -> Result<LcsAt> {
        let p = loc.point();
        let scalar = |f: &TensorField| -> Result<f64> { Ok(f.value_at(p)?.data()[0]) };
        let alpha = scalar(&self.alpha)?;
        let rho = scalar(&self.rho)?;
        Ok(LcsAt {
            xi: self.xi.value_at(p)?,
            eta: self.eta.value_at(p)?,
            phi: self.phi.value_at(p)?,
            alpha,
            rho,
            xi_alpha: scalar(&self.xi_alpha)?,
            dalpha: self.alpha.partials_at(p)?,
            nabla_xi: loc.covariant_derivative(&self.xi)?,
        })
    }
}

/// Structure data evaluated at a point, coordinate basis.
#[derive(Clone, Debug)]
pub struct LcsAt {
    pub xi: TensorValue,
    pub eta: TensorValue,
    pub phi: TensorValue,
    pub alpha: f64,
    pub rho: f64,
    pub xi_alpha: f64,
    pub dalpha: TensorValue,
    /// `[i, k]` = `∇_i ξ^k`.
    pub nabla_xi: TensorValue,
}

impl LcsAt {
    /// `α² - ρ`, the factor in the curvature identities.
    pub fn k(&self) -> f64 {
        self.alpha * self.alpha - self.rho
    }

    fn xi_xi(&self, loc: &Local<'_>) -> f64 {
        loc.inner(self.xi.data(), self.xi.data())
    }

    fn delta(i: usize, j: usize) -> f64 {
        if i == j {
            1.0
        } else {
            0.0
        }
    }

    /// `∇ξ - α(I + η⊗ξ)` with slots `[i, k]`.
    pub fn concircular_defect(&self, loc: &Local<'_>) -> TensorValue {
        TensorValue::from_fn(loc.dim(), &[Slot::Down, Slot::Up], Basis::Coordinate, |ik| {
            let (i, k) = (ik[0], ik[1]);
            self.nabla_xi.get(ik) - self.alpha * (Self::delta(i, k) + self.eta.get(&[i]) * self.xi.get(&[k]))
        })
    }
}

fn residual(loc: &Local<'_>, t: &TensorValue) -> f64 {
    loc.preferred(t).max_abs()
}

fn tensor(n: usize, slots: &[Slot], f: impl FnMut(&[usize]) -> f64) -> TensorValue {
    TensorValue::from_fn(n, slots, Basis::Coordinate, f)
}

const U: Slot = Slot::Up;
const D: Slot = Slot::Down;

/// Algebraic and differential axioms of the structure.
pub fn verify_axioms(geo: &Geometry, s: &LcsStructure, points: &[Point], tol: f64) -> Result<Report> {
    let n = geo.dim();
    let mut report = Report::new(tol);
    for p in points {
        let loc = geo.at(p.as_slice())?;
        let at = s.at(&loc)?;
        let (xi, eta, phi, g) = (&at.xi, &at.eta, &at.phi, loc.metric());
        let d = LcsAt::delta;

        let phi_xi = tensor(n, &[U], |k| (0..n).map(|j| phi.get(&[k[0], j]) * xi.get(&[j])).sum());
        report.record("phi_xi", residual(&loc, &phi_xi));

        let eta_phi = tensor(n, &[D], |j| (0..n).map(|k| eta.get(&[k]) * phi.get(&[k, j[0]])).sum());
        report.record("eta_phi", residual(&loc, &eta_phi));

        let eta_xi: f64 = (0..n).map(|k| eta.get(&[k]) * xi.get(&[k])).sum();
        report.record("eta_xi_plus_one", libm::fabs(eta_xi + 1.0));

        let phi2 = tensor(n, &[U, D], |ij| {
            let (i, j) = (ij[0], ij[1]);
            let sq: f64 = (0..n).map(|m| phi.get(&[i, m]) * phi.get(&[m, j])).sum();
            sq - d(i, j) - xi.get(&[i]) * eta.get(&[j])
        });
        report.record("phi_squared", residual(&loc, &phi2));

        let phi_low = tensor(n, &[D, D], |ij| (0..n).map(|k| g.get(&[ij[0], k]) * phi.get(&[k, ij[1]])).sum());
        let asym = tensor(n, &[D, D], |ij| phi_low.get(ij) - phi_low.get(&[ij[1], ij[0]]));
        report.record("phi_symmetric", residual(&loc, &asym));

        let phi_metric = tensor(n, &[D, D], |ij| {
            let (i, j) = (ij[0], ij[1]);
            let mut v = -g.get(ij) - eta.get(&[i]) * eta.get(&[j]);
            for_each_index(n, 2, |kl| v += g.get(kl) * phi.get(&[kl[0], i]) * phi.get(&[kl[1], j]));
            v
        });
        report.record("phi_metric", residual(&loc, &phi_metric));

        // (∇_X φ)Y - α[g(X,Y)ξ + 2η(X)η(Y)ξ + η(Y)X], slots [X, k, Y]
        let nphi = loc.covariant_derivative(s.phi())?;
        let nabla_phi = tensor(n, &[D, U, D], |idx| {
            let (m, k, j) = (idx[0], idx[1], idx[2]);
            let rhs = g.get(&[m, j]) * xi.get(&[k])
                + 2.0 * eta.get(&[m]) * eta.get(&[j]) * xi.get(&[k])
                + eta.get(&[j]) * d(k, m);
            nphi.get(idx) - at.alpha * rhs
        });
        report.record("nabla_phi", residual(&loc, &nabla_phi));

        report.record("concircular", residual(&loc, &at.concircular_defect(&loc)));

        let dalpha = tensor(n, &[D], |i| at.dalpha.get(i) - at.rho * eta.get(i));
        report.record("dalpha_rho_eta", residual(&loc, &dalpha));

        let deta = s.eta().partials_at(p.as_slice())?;
        let closed = tensor(n, &[D, D], |ij| deta.get(ij) - deta.get(&[ij[1], ij[0]]));
        report.record("eta_closed", residual(&loc, &closed));

        // N(∂_i, ∂_j)^k; coordinate brackets vanish
        let dphi = s.phi().partials_at(p.as_slice())?; // [m, k, j] = ∂_m φ^k_j
        let nijenhuis = tensor(n, &[D, D, U], |idx| {
            let (i, j, k) = (idx[0], idx[1], idx[2]);
            (0..n)
                .map(|m| {
                    phi.get(&[m, i]) * dphi.get(&[m, k, j]) - phi.get(&[m, j]) * dphi.get(&[m, k, i])
                        + phi.get(&[k, m]) * dphi.get(&[j, m, i])
                        - phi.get(&[k, m]) * dphi.get(&[i, m, j])
                })
                .sum()
        });
        report.record("nijenhuis", residual(&loc, &nijenhuis));
    }
    Ok(report)
}

/// Differential and curvature consequences of the axioms.
pub fn verify_prop21(geo: &Geometry, s: &LcsStructure, points: &[Point], tol: f64) -> Result<Report> {
    let n = geo.dim();
    let mut report = Report::new(tol);
    for p in points {
        let loc = geo.at(p.as_slice())?;
        let at = s.at(&loc)?;
        let (xi, eta, g, r) = (&at.xi, &at.eta, loc.metric(), loc.riemann());
        let (nx, k) = (&at.nabla_xi, at.k());
        let d = LcsAt::delta;

        let eta_nabla_xi = tensor(n, &[D], |i| (0..n).map(|m| eta.get(&[m]) * nx.get(&[i[0], m])).sum());
        report.record("eta_nabla_xi", residual(&loc, &eta_nabla_xi));
        let nabla_xi_xi = tensor(n, &[U], |m| (0..n).map(|i| xi.get(&[i]) * nx.get(&[i, m[0]])).sum());
        report.record("nabla_xi_xi", residual(&loc, &nabla_xi_xi));

        // R(∂_i, ∂_j)ξ, slots [l, i, j]
        let rxi = tensor(n, &[U, D, D], |idx| (0..n).map(|m| r.get(&[idx[0], idx[1], idx[2], m]) * xi.get(&[m])).sum());
        let curvature_xi = tensor(n, &[U, D, D], |idx| {
            let (l, i, j) = (idx[0], idx[1], idx[2]);
            rxi.get(idx) - k * (eta.get(&[j]) * d(l, i) - eta.get(&[i]) * d(l, j))
        });
        report.record("curvature_xi", residual(&loc, &curvature_xi));

        let eta_r = tensor(n, &[D, D, D], |idx| {
            let (i, j, kk) = (idx[0], idx[1], idx[2]);
            let lhs: f64 = (0..n).map(|l| eta.get(&[l]) * r.get(&[l, i, j, kk])).sum();
            lhs - k * (eta.get(&[i]) * g.get(&[j, kk]) - eta.get(&[j]) * g.get(&[i, kk]))
        });
        report.record("eta_curvature", residual(&loc, &eta_r));

        let eta_r_xi = tensor(n, &[D, D], |ij| (0..n).map(|l| eta.get(&[l]) * rxi.get(&[l, ij[0], ij[1]])).sum());
        report.record("eta_curvature_xi", residual(&loc, &eta_r_xi));

        let neta = loc.covariant_derivative(s.eta())?;
        let nabla_eta = tensor(n, &[D, D], |ij| {
            neta.get(ij) - at.alpha * (g.get(ij) + eta.get(&[ij[0]]) * eta.get(&[ij[1]]))
        });
        report.record("nabla_eta", residual(&loc, &nabla_eta));
        let nabla_xi_eta = tensor(n, &[D], |j| (0..n).map(|i| xi.get(&[i]) * neta.get(&[i, j[0]])).sum());
        report.record("nabla_xi_eta", residual(&loc, &nabla_xi_eta));

        report.record("lie_xi_phi", residual(&loc, &loc.lie_derivative(s.xi(), s.phi())?));
        report.record("lie_xi_eta", residual(&loc, &loc.lie_derivative(s.xi(), s.eta())?));
        let lie_g = loc.lie_derivative_metric(s.xi())?;
        report.record("lie_xi_g_minus_2_nabla_eta", residual(&loc, &lie_g.try_sub(&neta.scaled(2.0))?));
    }
    Ok(report)
}

/// Ricci identities of the structure: `S(X,ξ)`, `S(φX,φY)`, `ξ(α) + ρ`,
/// `Qφ = φQ` and the eigenvalue of `Q` on `ξ`.
pub fn verify_ricci(geo: &Geometry, s: &LcsStructure, points: &[Point], tol: f64) -> Result<Report> {
    let n = geo.dim();
    let nf = (n - 1) as f64;
    let mut report = Report::new(tol);
    for p in points {
        let loc = geo.at(p.as_slice())?;
        let at = s.at(&loc)?;
        let (xi, eta, phi, ric) = (&at.xi, &at.eta, &at.phi, loc.ricci());
        let k = at.k();
        let q = loc.ricci_operator();

        let s_xi = tensor(n, &[D], |i| {
            (0..n).map(|j| ric.get(&[i[0], j]) * xi.get(&[j])).sum::<f64>() - nf * k * eta.get(i)
        });
        report.record("ricci_xi", residual(&loc, &s_xi));

        let s_phi = tensor(n, &[D, D], |ij| {
            let (i, j) = (ij[0], ij[1]);
            let mut v = -ric.get(ij) - nf * k * eta.get(&[i]) * eta.get(&[j]);
            for_each_index(n, 2, |kl| v += ric.get(kl) * phi.get(&[kl[0], i]) * phi.get(&[kl[1], j]));
            v
        });
        report.record("ricci_phi_phi", residual(&loc, &s_phi));

        report.record("xi_alpha_plus_rho", libm::fabs(at.xi_alpha + at.rho));

        let commute = tensor(n, &[U, D], |ij| {
            let (i, j) = (ij[0], ij[1]);
            (0..n).map(|m| q.get(&[i, m]) * phi.get(&[m, j]) - phi.get(&[i, m]) * q.get(&[m, j])).sum()
        });
        report.record("ricci_operator_commutes_phi", residual(&loc, &commute));

        let eigen = nf * (at.alpha * at.alpha + at.xi_alpha);
        let q_xi = tensor(n, &[U], |i| {
            (0..n).map(|j| q.get(&[i[0], j]) * xi.get(&[j])).sum::<f64>() - eigen * xi.get(i)
        });
        report.record("ricci_operator_xi_eigen", residual(&loc, &q_xi));
    }
    Ok(report)
}
