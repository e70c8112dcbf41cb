//! Gradient solitons `Hess f + S + λg + μ η⊗η = 0` with `ξ = grad f`,
//! `η = df`. For the η-Einstein kind every identity here uses
//! `λ - scal/2` in place of `λ`.

use super::{Kind, ParamsAt, Potential, SolitonParams};
use crate::error::{Error, Result};
use crate::geometry::{Geometry, Local, Point};
use crate::lcs::LcsStructure;
use crate::report::Report;
use crate::tensor::{for_each_index, Basis, Slot, TensorValue};

fn potential(params: &SolitonParams) -> Result<&Potential> {
    params.potential.as_ref().ok_or(Error::PotentialAbsent)
}

/// `λ` of the gradient equation and its differential.
fn effective_lambda(loc: &Local<'_>, params: &SolitonParams, pa: &ParamsAt) -> (f64, TensorValue) {
    match params.kind() {
        Kind::EtaRicci => (pa.lambda, pa.dlambda.clone()),
        Kind::EtaEinstein => (
            pa.lambda - 0.5 * loc.scalar_curvature(),
            pa.dlambda.try_sub(&loc.scalar_gradient().scaled(0.5)).expect("same shape"),
        ),
    }
}

fn delta(a: usize, b: usize) -> f64 {
    f64::from(u8::from(a == b))
}

/// Residuals of the gradient equation in (0,2) form, in operator form
/// `∇ξ + Q + λI + μ df⊗ξ`, and of the antisymmetrised `∇Q` formula. The
/// concircular factor enters the last one; without a structure it is 0.
pub fn gradient_residuals(
    geo: &Geometry,
    params: &SolitonParams,
    lcs: Option<&LcsStructure>,
    points: &[Point],
    tol: f64,
) -> Result<Report> {
    let pot = potential(params)?;
    params.check_potential(geo, points, tol)?;
    let n = geo.dim();
    let mut report = Report::new(tol);
    for p in points {
        let loc = geo.at(p.as_slice())?;
        let pa = params.at(&loc)?;
        let (lambda, dlambda) = effective_lambda(&loc, params, &pa);
        let (g, ric, df, xi) = (loc.metric(), loc.ricci(), &pa.eta, &pa.xi);
        let hess = pot.hessian.value_at(p.as_slice())?;

        let eq = TensorValue::from_fn(n, &[Slot::Down; 2], Basis::Coordinate, |ij| {
            hess.get(ij) + ric.get(ij) + lambda * g.get(ij) + pa.mu * df.get(&[ij[0]]) * df.get(&[ij[1]])
        });
        report.record("hessian_equation", loc.preferred(&eq).max_abs());

        let nxi = loc.covariant_derivative(params.xi())?;
        let q = loc.ricci_operator();
        let op = TensorValue::from_fn(n, &[Slot::Down, Slot::Up], Basis::Coordinate, |xi_idx| {
            let (x, i) = (xi_idx[0], xi_idx[1]);
            nxi.get(xi_idx) + q.get(&[i, x]) + lambda * delta(i, x) + pa.mu * df.get(&[x]) * xi.get(&[i])
        });
        report.record("operator_form", loc.preferred(&op).max_abs());

        let (alpha, dalpha) = match lcs {
            Some(s) => {
                let st = s.at(&loc)?;
                (st.alpha, st.dalpha)
            }
            None => (0.0, TensorValue::zeros(n, &[Slot::Down], Basis::Coordinate)),
        };
        let ns = loc.ricci_derivative()?;
        let gi = loc.inverse_metric();
        // (∇_X Q)^i_Y = g^ik (∇_X S)_kY
        let nq = |x: usize, i: usize, y: usize| -> f64 { (0..n).map(|k| gi.get(&[i, k]) * ns.get(&[x, k, y])).sum() };
        let w = |x: usize| dlambda.get(&[x]) - alpha * pa.mu * df.get(&[x]);
        let dbeta = |x: usize| dalpha.get(&[x]) + pa.dmu.get(&[x]);
        let antisym = TensorValue::from_fn(n, &[Slot::Down, Slot::Down, Slot::Up], Basis::Coordinate, |idx| {
            let (x, y, i) = (idx[0], idx[1], idx[2]);
            let lhs = nq(x, i, y) - nq(y, i, x);
            let wedge = |a: &dyn Fn(usize) -> f64| a(x) * delta(i, y) - a(y) * delta(i, x);
            let rhs = alpha * alpha * wedge(&|k| df.get(&[k])) - wedge(&|k| dalpha.get(&[k])) - wedge(&w)
                - (dbeta(x) * df.get(&[y]) - df.get(&[x]) * dbeta(y)) * xi.get(&[i]);
            lhs - rhs
        });
        report.record("nabla_ricci_operator", loc.preferred(&antisym).max_abs());
    }
    Ok(report)
}

/// The double bound on `|S|²` and its variants at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bounds {
    pub lower: f64,
    /// `|S|²`.
    pub mid: f64,
    pub upper: f64,
    pub holds: bool,
    /// Upper bound for the η-Einstein kind: `upper + μ scal |ξ|²`.
    pub einstein_upper: f64,
    /// Bounds with `|ξ|² = k` constant, when `d|ξ|²` vanishes here.
    pub constant_length: Option<(f64, f64)>,
}

/// `|∇ξ|² + μ²|ξ|⁴ + μ ξ(|ξ|²) ∓ ...` around `|S|²`. `holds` allows a
/// relative slack of `tol`.
pub fn ricci_norm_bounds(loc: &Local<'_>, params: &SolitonParams, tol: f64) -> Result<Bounds> {
    let pot = potential(params)?;
    let nf = loc.dim() as f64;
    let pa = params.at(loc)?;
    let nabla_xi = loc.covariant_derivative(params.xi())?;
    let grad_sq = loc.norm_sq(&nabla_xi);
    let laplacian = pot.laplacian.value_at(loc.point())?.data()[0];
    let scal = loc.scalar_curvature();
    let (mu, len) = (pa.mu, pa.xi_norm);
    let base = grad_sq + mu * mu * len * len + mu * pa.along_xi(&pa.dxi_norm);
    let lower = base - (laplacian + mu * len) * (laplacian + mu * len) / nf;
    let upper = base + scal * scal / nf;
    let mid = loc.norm_sq(loc.ricci());
    let slack = tol * (1.0 + libm::fabs(mid));
    let constant_length = (pa.dxi_norm.max_abs() < tol).then(|| {
        let b = grad_sq + mu * mu * len * len;
        (b - (laplacian + mu * len) * (laplacian + mu * len) / nf, b + scal * scal / nf)
    });
    Ok(Bounds {
        lower,
        mid,
        upper,
        holds: lower <= mid + slack && mid <= upper + slack,
        einstein_upper: upper + mu * scal * len,
        constant_length,
    })
}

/// `Δf + scal + nλ + μ|ξ|²`.
pub fn trace_identity(loc: &Local<'_>, params: &SolitonParams) -> Result<f64> {
    let pot = potential(params)?;
    let pa = params.at(loc)?;
    let (lambda, _) = effective_lambda(loc, params, &pa);
    let laplacian = pot.laplacian.value_at(loc.point())?.data()[0];
    Ok(laplacian + loc.scalar_curvature() + loc.dim() as f64 * lambda + pa.mu * pa.xi_norm)
}

/// `½(Δ - ξ)(|ξ|²) - [|∇ξ|² + λ|ξ|² + μ|ξ|²(|ξ|² - 2Δf) + (n-2)ξ(λ) - |ξ|²ξ(μ)]`.
pub fn bochner_residual(loc: &Local<'_>, params: &SolitonParams) -> Result<f64> {
    let pot = potential(params)?;
    let nf = loc.dim() as f64;
    let pa = params.at(loc)?;
    let (lambda, dlambda) = effective_lambda(loc, params, &pa);
    let len = pa.xi_norm;
    let lap_len = loc.hessian_package(&params.xi_norm.components()[0])?.laplacian;
    let lhs = 0.5 * (lap_len - pa.along_xi(&pa.dxi_norm));
    let grad_sq = loc.norm_sq(&loc.covariant_derivative(params.xi())?);
    let laplacian = pot.laplacian.value_at(loc.point())?.data()[0];
    let rhs = grad_sq + lambda * len + pa.mu * len * (len - 2.0 * laplacian) + (nf - 2.0) * pa.along_xi(&dlambda)
        - len * pa.along_xi(&pa.dmu);
    Ok(lhs - rhs)
}

/// Identities the Bochner formula is assembled from. The contracted
/// Bianchi identity needs no potential and is always recorded.
pub fn auxiliary_identities(geo: &Geometry, params: &SolitonParams, points: &[Point], tol: f64) -> Result<Report> {
    let n = geo.dim();
    let mut report = Report::new(tol);
    for p in points {
        let loc = geo.at(p.as_slice())?;
        let div_s = loc.divergence_sym2(&loc.ricci_derivative()?);
        let bianchi = div_s.try_sub(&loc.scalar_gradient().scaled(0.5))?;
        report.record("contracted_bianchi", loc.preferred(&bianchi).max_abs());

        let Some(pot) = params.potential.as_ref() else { continue };
        let pa = params.at(&loc)?;
        let (lambda, _) = effective_lambda(&loc, params, &pa);
        let (xi, ric, len) = (pa.xi.data(), loc.ricci(), pa.xi_norm);
        report.record(
            "ricci_xi_xi",
            loc.ricci_apply(xi, xi) + 0.5 * pa.along_xi(&pa.dxi_norm) + lambda * len + pa.mu * len * len,
        );

        let div_h = loc.divergence_sym2(&loc.covariant_derivative(&pot.hessian)?);
        let dlap = pot.laplacian.partials_at(p.as_slice())?;
        let identity = TensorValue::from_fn(n, &[Slot::Down], Basis::Coordinate, |j| {
            let s_xi: f64 = (0..n).map(|m| ric.get(&[j[0], m]) * xi[m]).sum();
            div_h.get(j) - dlap.get(j) - s_xi
        });
        report.record("div_hessian", loc.preferred(&identity).max_abs());

        let mut div_h_xi = 0.0;
        for_each_index(n, 1, |j| div_h_xi += div_h.get(j) * xi[j[0]]);
        let lap_len = loc.hessian_package(&params.xi_norm.components()[0])?.laplacian;
        let grad_sq = loc.norm_sq(&loc.covariant_derivative(params.xi())?);
        report.record("div_hessian_xi", div_h_xi - 0.5 * lap_len + grad_sq);
    }
    Ok(report)
}
