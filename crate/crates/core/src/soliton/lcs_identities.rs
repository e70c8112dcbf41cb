use alloc::vec::Vec;

use super::{SolitonParams, Verdict};
use crate::error::Result;
use crate::geometry::{Geometry, Local, Point};
use crate::lcs::{LcsAt, LcsStructure};
use crate::report::Report;
use crate::tensor::{Basis, Slot, TensorValue};

const D: Slot = Slot::Down;

fn tensor(n: usize, slots: &[Slot], f: impl FnMut(&[usize]) -> f64) -> TensorValue {
    TensorValue::from_fn(n, slots, Basis::Coordinate, f)
}

/// `μ - λ = (n-1)(α² - ρ)`, the scalar-curvature formula and its
/// differential (the constant-curvature criterion).
pub fn check_identities(
    geo: &Geometry,
    s: &LcsStructure,
    params: &SolitonParams,
    points: &[Point],
    tol: f64,
) -> Result<Report> {
    let n = geo.dim();
    let nf = n as f64;
    let mut report = Report::new(tol);
    for p in points {
        let loc = geo.at(p.as_slice())?;
        let st = s.at(&loc)?;
        let pa = params.at(&loc)?;
        report.record("mu_minus_lambda", pa.mu - pa.lambda - (nf - 1.0) * st.k());

        let formula = (1.0 - nf) * (st.alpha - nf * (st.alpha * st.alpha + st.xi_alpha) + pa.mu);
        report.record("scalar_curvature_formula", loc.scalar_curvature() - formula);

        // d scal = (1-n)[dμ - (1-2nα)ξ(α)η - n d(ξ(α))]
        let dxa = s.xi_alpha_field().partials_at(p.as_slice())?;
        let dscal = loc.scalar_gradient();
        let criterion = tensor(n, &[D], |i| {
            let inner = pa.dmu.get(i) - (1.0 - 2.0 * nf * st.alpha) * st.xi_alpha * st.eta.get(i) - nf * dxa.get(i);
            dscal.get(i) - (1.0 - nf) * inner
        });
        report.record("constant_scal_criterion", loc.preferred(&criterion).max_abs());
    }
    Ok(report)
}

/// Hypothesis and conclusion values of one theorem over the samples.
#[derive(Clone, Debug, PartialEq)]
pub struct TheoremCheck {
    pub name: &'static str,
    pub hypothesis: Vec<f64>,
    pub conclusion: Vec<f64>,
    pub verdict: Verdict,
}

impl TheoremCheck {
    fn new(name: &'static str) -> TheoremCheck {
        TheoremCheck { name, hypothesis: Vec::new(), conclusion: Vec::new(), verdict: Verdict::Vacuous }
    }

    fn finish(mut self, tol: f64) -> TheoremCheck {
        self.verdict = Verdict::decide(&self.hypothesis, &self.conclusion, tol);
        self
    }
}

#[derive(Clone, Debug)]
pub struct NablaSReport {
    /// `∇S` against its closed form for a quasi-Einstein Ricci tensor.
    pub closed_form: Report,
    /// Ricci symmetric, η-recurrent and Codazzi cases.
    pub theorems: Vec<TheoremCheck>,
}

/// `d(α² + ξ(α))` at a point.
fn k_differential(s: &LcsStructure, st: &LcsAt, p: &[f64]) -> Result<TensorValue> {
    let dxa = s.xi_alpha_field().partials_at(p)?;
    let n = dxa.dim();
    Ok(tensor(n, &[D], |i| 2.0 * st.alpha * st.dalpha.get(i) + dxa.get(i)))
}

pub fn nabla_s_conditions(
    geo: &Geometry,
    s: &LcsStructure,
    params: &SolitonParams,
    points: &[Point],
    tol: f64,
) -> Result<NablaSReport> {
    let n = geo.dim();
    let mut closed_form = Report::new(tol);
    let mut symmetric = TheoremCheck::new("ricci_symmetric");
    let mut recurrent = TheoremCheck::new("ricci_eta_recurrent");
    let mut codazzi = TheoremCheck::new("ricci_codazzi");
    for p in points {
        let loc = geo.at(p.as_slice())?;
        let st = s.at(&loc)?;
        let pa = params.at(&loc)?;
        let ns = loc.ricci_derivative()?;
        let (g, eta, ric) = (loc.metric(), &st.eta, loc.ricci());
        let e = |i: usize| eta.get(&[i]);

        let m = tensor(n, &[D, D, D], |idx| {
            let (x, y, z) = (idx[0], idx[1], idx[2]);
            -(st.dalpha.get(&[x]) + pa.dlambda.get(&[x])) * g.get(&[y, z])
                - (st.dalpha.get(&[x]) + pa.dmu.get(&[x])) * e(y) * e(z)
                - st.alpha
                    * (st.alpha + pa.mu)
                    * (g.get(&[x, y]) * e(z) + g.get(&[x, z]) * e(y) + 2.0 * e(x) * e(y) * e(z))
        });
        closed_form.record("nabla_ricci_closed_form", loc.preferred(&ns.try_sub(&m)?).max_abs());

        let dk = k_differential(s, &st, p.as_slice())?;
        let dxa = s.xi_alpha_field().partials_at(p.as_slice())?;
        let xi_xi_alpha = pa.along_xi(&dxa);

        symmetric.hypothesis.push(loc.preferred(&ns).max_abs());
        symmetric.conclusion.push(loc.preferred(&dk).max_abs());

        let rec = tensor(n, &[D, D, D], |idx| ns.get(idx) - e(idx[0]) * ric.get(&idx[1..]));
        recurrent.hypothesis.push(loc.preferred(&rec).max_abs());
        let a = st.alpha;
        recurrent.conclusion.push(libm::fabs(a * a + (1.0 + 2.0 * a) * st.xi_alpha + xi_xi_alpha));

        let cod = tensor(n, &[D, D, D], |idx| ns.get(idx) - ns.get(&[idx[1], idx[0], idx[2]]));
        codazzi.hypothesis.push(loc.preferred(&cod).max_abs());
        let wedge = tensor(n, &[D, D], |ij| dk.get(&[ij[0]]) * e(ij[1]) - e(ij[0]) * dk.get(&[ij[1]]));
        codazzi.conclusion.push(loc.preferred(&wedge).max_abs());
    }
    Ok(NablaSReport {
        closed_form,
        theorems: alloc::vec![symmetric.finish(tol), recurrent.finish(tol), codazzi.finish(tol)],
    })
}

/// `2αμ + ξ(μ) + 2α² - [2(n-2)α - 1]ξ(α) - (n-2)ξ(ξ(α))`, which vanishes
/// for every gradient almost η-Ricci soliton on the structure.
pub fn gradient_constraint_residual(loc: &Local<'_>, s: &LcsStructure, params: &SolitonParams) -> Result<f64> {
    let nf = loc.dim() as f64;
    let st = s.at(loc)?;
    let pa = params.at(loc)?;
    let xxa = pa.along_xi(&s.xi_alpha_field().partials_at(loc.point())?);
    let a = st.alpha;
    Ok(2.0 * a * pa.mu + pa.along_xi(&pa.dmu) + 2.0 * a * a
        - (2.0 * (nf - 2.0) * a - 1.0) * st.xi_alpha
        - (nf - 2.0) * xxa)
}

#[derive(Clone, Debug)]
pub struct GradientConstraints {
    pub constraint: Report,
    /// Present when `λ` and `μ` are constant over the samples: then `α` must
    /// be constant with `λ = -α - (n-1)α²` and `μ = -α`.
    pub constant_params: Option<Report>,
}

pub fn lcs_gradient_constraints(
    geo: &Geometry,
    s: &LcsStructure,
    params: &SolitonParams,
    points: &[Point],
    tol: f64,
) -> Result<GradientConstraints> {
    let nf = geo.dim() as f64;
    let mut constraint = Report::new(tol);
    let mut constant = Report::new(tol);
    let mut params_constant = true;
    for p in points {
        let loc = geo.at(p.as_slice())?;
        constraint.record("lcs_gradient_constraint", gradient_constraint_residual(&loc, s, params)?);
        let st = s.at(&loc)?;
        let pa = params.at(&loc)?;
        params_constant &= pa.dlambda.max_abs() < tol && pa.dmu.max_abs() < tol;
        constant.record("dalpha", loc.preferred(&st.dalpha).max_abs());
        constant.record("lambda_formula", pa.lambda + st.alpha + (nf - 1.0) * st.alpha * st.alpha);
        constant.record("mu_formula", pa.mu + st.alpha);
    }
    Ok(GradientConstraints { constraint, constant_params: params_constant.then_some(constant) })
}
