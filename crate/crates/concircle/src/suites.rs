//! Verification suites: each turns core results over the sample points into
//! a table of residual columns, informational columns and verdicts.

use concircle_core::lcs::{verify_axioms, verify_prop21, verify_ricci};
use concircle_core::soliton::{
    self, auxiliary_identities, bochner_residual, check_identities, classify, condition_r_dot_s, condition_s_dot_r,
    gradient_residuals, lcs_gradient_constraints, nabla_s_conditions, ricci_norm_bounds, shortcut_fit, trace_identity,
    Classification, ConditionOutcome,
};
use concircle_core::tensor::{for_each_index, max_abs};
use concircle_core::{Expr, Geometry, Kind, LcsStructure, Point, Report, SolitonParams, Symbols, Verdict};

use crate::error::{Error, Result};
use crate::file::Model;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    CheckStructure,
    Curvature,
    SolitonFit,
    SolitonVerify,
    Theorems,
    Gradient,
    Bounds,
    Bochner,
    All,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::CheckStructure => "check-structure",
            Command::Curvature => "curvature",
            Command::SolitonFit => "soliton-fit",
            Command::SolitonVerify => "soliton-verify",
            Command::Theorems => "theorems",
            Command::Gradient => "gradient",
            Command::Bounds => "bounds",
            Command::Bochner => "bochner",
            Command::All => "all",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::NotApplicable => "not-applicable",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Column {
    pub name: String,
    pub max: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub point: Vec<f64>,
    pub values: Vec<(String, f64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Suite {
    pub name: &'static str,
    pub tolerance: f64,
    pub status: Status,
    /// Columns gated by the tolerance.
    pub residuals: Vec<Column>,
    /// Columns reported without a gate, with their (min, max).
    pub info: Vec<(String, f64, f64)>,
    pub verdicts: Vec<(String, String)>,
    pub notes: Vec<String>,
    pub rows: Vec<Row>,
}

impl Suite {
    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    /// Largest gated residual; NaN if any is NaN, 0 with no columns.
    pub fn residual_max(&self) -> f64 {
        max_abs(&self.residuals.iter().map(|c| c.max).collect::<Vec<_>>())
    }

    pub fn column(&self, name: &str) -> Option<&Column> {
        self.residuals.iter().find(|c| c.name == name)
    }

    pub fn values(&self, name: &str) -> Vec<f64> {
        self.rows.iter().filter_map(|r| r.values.iter().find(|(k, _)| k == name).map(|(_, v)| *v)).collect()
    }

    pub fn verdict(&self, name: &str) -> Option<&str> {
        self.verdicts.iter().find(|(k, _)| k == name).map(|(_, v)| v.as_str())
    }
}

struct Builder {
    suite: Suite,
    failed: bool,
}

impl Builder {
    fn new(name: &'static str, points: &[Point], tol: f64) -> Builder {
        let rows = points.iter().map(|p| Row { point: p.0.clone(), values: Vec::new() }).collect();
        Builder {
            suite: Suite {
                name,
                tolerance: tol,
                status: Status::Pass,
                residuals: Vec::new(),
                info: Vec::new(),
                verdicts: Vec::new(),
                notes: Vec::new(),
                rows,
            },
            failed: false,
        }
    }

    fn not_applicable(name: &'static str, tol: f64, reason: &str) -> Suite {
        let mut b = Builder::new(name, &[], tol);
        b.suite.status = Status::NotApplicable;
        b.suite.notes.push(reason.to_string());
        b.suite
    }

    fn push_rows(&mut self, name: &str, values: &[f64]) {
        if values.len() == self.suite.rows.len() {
            for (row, v) in self.suite.rows.iter_mut().zip(values) {
                row.values.push((name.to_string(), *v));
            }
        }
    }

    fn residual(&mut self, name: &str, values: &[f64]) {
        let max = max_abs(values);
        let pass = max < self.suite.tolerance;
        self.suite.residuals.push(Column { name: name.to_string(), max, pass });
        self.push_rows(name, values);
    }

    fn report(&mut self, report: &Report) {
        for r in report.residuals() {
            self.residual(&r.name, &r.values);
        }
    }

    fn info(&mut self, name: &str, values: &[f64]) {
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        self.suite.info.push((name.to_string(), lo, hi));
        self.push_rows(name, values);
    }

    fn verdict(&mut self, name: &str, v: Verdict) {
        self.failed |= v == Verdict::HoldsFailed;
        self.suite.verdicts.push((name.to_string(), v.as_str().to_string()));
    }

    fn label(&mut self, name: &str, value: &str) {
        self.suite.verdicts.push((name.to_string(), value.to_string()));
    }

    fn note(&mut self, note: impl Into<String>) {
        self.suite.notes.push(note.into());
    }

    fn finish(mut self) -> Suite {
        let columns_ok = self.suite.residuals.iter().all(|c| c.pass);
        self.suite.status = if columns_ok && !self.failed { Status::Pass } else { Status::Fail };
        self.suite
    }
}

/// Everything a suite may need, built once per run.
pub struct Context {
    pub geometry: Geometry,
    pub points: Vec<Point>,
    pub tol: f64,
    pub seed: u64,
    pub structure: Option<LcsStructure>,
    pub soliton: Option<SolitonParams>,
}

fn suite_err(suite: &'static str) -> impl Fn(concircle_core::Error) -> Error {
    move |source| Error::Suite { suite, source }
}

impl Context {
    pub fn new(model: Model, points: Vec<Point>, tol: f64) -> Result<Context> {
        let geo = model.geometry;
        let structure = match model.structure {
            Some(s) => Some(LcsStructure::derive(&geo, s.xi, s.alpha, &points, tol).map_err(suite_err("structure"))?),
            None => None,
        };
        let soliton = match model.soliton {
            Some(s) => {
                let xi = s.xi.or_else(|| structure.as_ref().map(|st| st.xi().components().to_vec()));
                let params = match (xi, s.f) {
                    (Some(xi), f) => {
                        let p = SolitonParams::new(&geo, xi, s.lambda, s.mu, s.kind).map_err(suite_err("soliton"))?;
                        match f {
                            Some(f) => p.with_potential(&geo, f),
                            None => p,
                        }
                    }
                    (None, Some(f)) => {
                        SolitonParams::gradient(&geo, f, s.lambda, s.mu, s.kind).map_err(suite_err("soliton"))?
                    }
                    (None, None) => {
                        return Err(Error::Invalid("[soliton] needs `xi`, `f` or a [structure] section".into()))
                    }
                };
                Some(params)
            }
            None => None,
        };
        Ok(Context { geometry: geo, points, tol, seed: 0, structure, soliton })
    }

    fn each<T>(&self, suite: &'static str, mut f: impl FnMut(&concircle_core::Local<'_>) -> concircle_core::Result<T>) -> Result<Vec<T>> {
        self.points
            .iter()
            .map(|p| {
                let loc = self.geometry.at(p.as_slice())?;
                f(&loc)
            })
            .collect::<concircle_core::Result<Vec<T>>>()
            .map_err(suite_err(suite))
    }

    pub fn run(&self, command: Command) -> Result<Vec<Suite>> {
        use Command::*;
        let order = match command {
            All => vec![CheckStructure, Curvature, SolitonFit, SolitonVerify, Theorems, Gradient, Bounds, Bochner],
            one => vec![one],
        };
        let mut suites = Vec::new();
        for c in order {
            match c {
                CheckStructure => suites.push(self.structure_suite()?),
                Curvature => suites.push(self.curvature_suite()?),
                SolitonFit => suites.push(self.fit_suite()?),
                SolitonVerify => {
                    suites.push(self.equation_suite()?);
                    suites.push(self.identities_suite()?);
                }
                Theorems => suites.push(self.theorems_suite()?),
                Gradient => suites.push(self.gradient_suite()?),
                Bounds => suites.push(self.bounds_suite()?),
                Bochner => suites.push(self.bochner_suite()?),
                All => unreachable!(),
            }
        }
        Ok(suites)
    }

    fn structure_suite(&self) -> Result<Suite> {
        const NAME: &str = "structure";
        let Some(s) = &self.structure else {
            return Ok(Builder::not_applicable(NAME, self.tol, "no concircular structure declared"));
        };
        let (geo, pts, tol) = (&self.geometry, &self.points[..], self.tol);
        let mut b = Builder::new(NAME, pts, tol);
        let at = self.each(NAME, |loc| s.at(loc))?;
        b.info("alpha", &at.iter().map(|a| a.alpha).collect::<Vec<_>>());
        b.info("rho", &at.iter().map(|a| a.rho).collect::<Vec<_>>());
        b.info("k", &at.iter().map(|a| a.k()).collect::<Vec<_>>());
        let err = suite_err(NAME);
        b.report(&verify_axioms(geo, s, pts, tol).map_err(&err)?);
        b.report(&verify_prop21(geo, s, pts, tol).map_err(&err)?);
        b.report(&verify_ricci(geo, s, pts, tol).map_err(&err)?);
        b.note(format!("alpha = {}", s.alpha().to_source()));
        Ok(b.finish())
    }

    fn curvature_suite(&self) -> Result<Suite> {
        const NAME: &str = "curvature";
        let geo = &self.geometry;
        let n = geo.dim();
        let mut b = Builder::new(NAME, &self.points, self.tol);
        let probe = probe_function(geo);
        let rows = self.each(NAME, |loc| {
            let r = loc.preferred(loc.riemann_down());
            let (mut skew1, mut skew2, mut pair, mut bianchi) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
            for_each_index(n, 4, |idx| {
                let [i, j, k, l] = [idx[0], idx[1], idx[2], idx[3]];
                let v = r.get(idx);
                skew1 = skew1.max((v + r.get(&[j, i, k, l])).abs());
                skew2 = skew2.max((v + r.get(&[i, j, l, k])).abs());
                pair = pair.max((v - r.get(&[k, l, i, j])).abs());
                bianchi = bianchi.max((v + r.get(&[j, k, i, l]) + r.get(&[k, i, j, l])).abs());
            });
            let nabla_g = loc.covariant_derivative(geo.metric_field())?;
            let div_s = loc.divergence_sym2(&loc.ricci_derivative()?);
            let contracted = div_s.try_sub(&loc.scalar_gradient().scaled(0.5))?;
            let hess = loc.hessian_package(&probe)?.hessian;
            let mut out = vec![
                r.max_abs(),
                loc.preferred(loc.ricci()).max_abs(),
                loc.scalar_curvature(),
                skew1,
                skew2,
                pair,
                bianchi,
                loc.preferred(&nabla_g).max_abs(),
                loc.preferred(loc.ricci()).max_asymmetry(0, 1),
                loc.preferred(&contracted).max_abs(),
                loc.preferred(&hess).max_asymmetry(0, 1),
            ];
            if let Some(frame) = loc.frame() {
                out.push(frame.orthonormality_defect());
                let koszul = loc.frame_connection()?;
                out.push(koszul.try_sub(&loc.frame_connection_from_christoffel()?)?.max_abs());
            }
            Ok(out)
        })?;
        let col = |i: usize| rows.iter().map(|r| r[i]).collect::<Vec<_>>();
        b.info("riemann_max", &col(0));
        b.info("ricci_max", &col(1));
        b.info("scalar_curvature", &col(2));
        for (i, name) in [
            "riemann_skew_first_pair",
            "riemann_skew_second_pair",
            "riemann_pair_symmetry",
            "first_bianchi",
            "metric_compatibility",
            "ricci_symmetry",
            "contracted_bianchi",
            "hessian_symmetry",
        ]
        .iter()
        .enumerate()
        {
            b.residual(name, &col(i + 3));
        }
        if geo.has_frame() {
            b.residual("frame_orthonormality", &col(11));
            b.residual("koszul_vs_christoffel", &col(12));
        }
        b.note(format!("hessian_symmetry uses the probe f = {}", probe.to_source()));
        Ok(b.finish())
    }

    fn fit_suite(&self) -> Result<Suite> {
        const NAME: &str = "soliton-fit";
        let Some(s) = &self.structure else {
            return Ok(Builder::not_applicable(NAME, self.tol, "fitting needs a concircular structure"));
        };
        let geo = &self.geometry;
        let kind = self.soliton.as_ref().map_or(Kind::EtaRicci, |p| p.kind());
        let probe = SolitonParams::new(geo, s.xi().components().to_vec(), Expr::zero(), Expr::zero(), kind)
            .map_err(suite_err(NAME))?;
        let nf = geo.dim() as f64;
        let mut b = Builder::new(NAME, &self.points, self.tol);
        let rel = |a: f64, e: f64| (a - e).abs() / (1.0 + e.abs());
        let rows = self.each(NAME, |loc| {
            let fit = probe.fit_at(loc)?;
            let st = s.at(loc)?;
            let shortcut = match kind {
                Kind::EtaRicci => shortcut_fit(loc, st.xi.data(), st.alpha)
                    .map_or(f64::NAN, |(l, m)| rel(l, fit.lambda).max(rel(m, fit.mu))),
                Kind::EtaEinstein => 0.0,
            };
            let declared = match &self.soliton {
                Some(p) => {
                    let at = p.at(loc)?;
                    Some((rel(fit.lambda, at.lambda), rel(fit.mu, at.mu)))
                }
                None => None,
            };
            let identity = fit.mu - fit.lambda - (nf - 1.0) * st.k();
            Ok((fit, shortcut, declared, identity))
        })?;
        let lambdas: Vec<f64> = rows.iter().map(|r| r.0.lambda).collect();
        b.info("lambda", &lambdas);
        b.info("mu", &rows.iter().map(|r| r.0.mu).collect::<Vec<_>>());
        b.residual("least_squares", &rows.iter().map(|r| r.0.residual).collect::<Vec<_>>());
        if kind == Kind::EtaRicci {
            b.residual("shortcut_agreement", &rows.iter().map(|r| r.1).collect::<Vec<_>>());
        }
        b.residual("mu_minus_lambda", &rows.iter().map(|r| r.3).collect::<Vec<_>>());
        if self.soliton.is_some() {
            b.residual("declared_lambda", &rows.iter().map(|r| r.2.map_or(f64::NAN, |d| d.0)).collect::<Vec<_>>());
            b.residual("declared_mu", &rows.iter().map(|r| r.2.map_or(f64::NAN, |d| d.1)).collect::<Vec<_>>());
        }
        let class = match classify(&lambdas, self.tol) {
            Classification::Steady => "steady",
            Classification::Shrinking => "shrinking",
            Classification::Expanding => "expanding",
            Classification::Mixed => "mixed",
        };
        b.label("classification", class);
        b.note("classification is by the sign of the fitted lambda over this sample window only");
        Ok(b.finish())
    }

    fn equation_suite(&self) -> Result<Suite> {
        const NAME: &str = "soliton-equation";
        let Some(p) = &self.soliton else {
            return Ok(Builder::not_applicable(NAME, self.tol, "no soliton declared"));
        };
        let mut b = Builder::new(NAME, &self.points, self.tol);
        let rows = self.each(NAME, |loc| {
            let at = p.at(loc)?;
            let residual = loc.preferred(&p.residual_at(loc)?).max_abs();
            let potential = match p.potential() {
                Some(f) => {
                    let grad = loc.hessian_package(f)?.gradient;
                    loc.preferred(&grad.try_sub(&at.xi)?).max_abs()
                }
                None => 0.0,
            };
            Ok([at.lambda, at.mu, residual, potential])
        })?;
        let col = |i: usize| rows.iter().map(|r| r[i]).collect::<Vec<_>>();
        b.info("lambda", &col(0));
        b.info("mu", &col(1));
        b.residual("soliton_equation", &col(2));
        if p.has_potential() {
            b.residual("potential_gradient", &col(3));
        }
        Ok(b.finish())
    }

    fn identities_suite(&self) -> Result<Suite> {
        const NAME: &str = "lcs-identities";
        let (Some(s), Some(p)) = (&self.structure, &self.soliton) else {
            return Ok(Builder::not_applicable(NAME, self.tol, "needs a concircular structure and a soliton"));
        };
        let (geo, pts, tol) = (&self.geometry, &self.points[..], self.tol);
        let err = suite_err(NAME);
        let mut b = Builder::new(NAME, pts, tol);
        b.report(&check_identities(geo, s, p, pts, tol).map_err(&err)?);
        let nabla = nabla_s_conditions(geo, s, p, pts, tol).map_err(&err)?;
        b.report(&nabla.closed_form);
        for th in &nabla.theorems {
            b.info(&format!("{}_hypothesis", th.name), &th.hypothesis);
        }
        Ok(b.finish())
    }

    fn theorems_suite(&self) -> Result<Suite> {
        const NAME: &str = "theorems";
        let (Some(s), Some(p)) = (&self.structure, &self.soliton) else {
            return Ok(Builder::not_applicable(NAME, self.tol, "needs a concircular structure and a soliton"));
        };
        let (geo, pts, tol) = (&self.geometry, &self.points[..], self.tol);
        let err = suite_err(NAME);
        let mut b = Builder::new(NAME, pts, tol);
        for out in [
            condition_r_dot_s(geo, s, p, pts, tol).map_err(&err)?,
            condition_s_dot_r(geo, s, p, pts, tol).map_err(&err)?,
        ] {
            condition_columns(&mut b, &out);
        }
        for th in nabla_s_conditions(geo, s, p, pts, tol).map_err(&err)?.theorems {
            b.info(&format!("{}_conclusion", th.name), &th.conclusion);
            b.verdict(th.name, th.verdict);
        }
        b.note("a `holds, conclusion FAILED` verdict means an engine/derivation mismatch and fails the suite");
        Ok(b.finish())
    }

    fn gradient_suite(&self) -> Result<Suite> {
        const NAME: &str = "gradient";
        let Some(p) = self.soliton.as_ref().filter(|p| p.has_potential()) else {
            return Ok(Builder::not_applicable(NAME, self.tol, "no potential function declared"));
        };
        let (geo, pts, tol) = (&self.geometry, &self.points[..], self.tol);
        let err = suite_err(NAME);
        let mut b = Builder::new(NAME, pts, tol);
        b.report(&gradient_residuals(geo, p, self.structure.as_ref(), pts, tol).map_err(&err)?);
        let f = p.potential().expect("filtered on potential");
        let sym = self.each(NAME, |loc| Ok(loc.preferred(&loc.hessian_package(f)?.hessian).max_asymmetry(0, 1)))?;
        b.residual("hessian_symmetry", &sym);
        match &self.structure {
            Some(s) => {
                let c = lcs_gradient_constraints(geo, s, p, pts, tol).map_err(&err)?;
                b.report(&c.constraint);
                match c.constant_params {
                    Some(report) => {
                        b.note("lambda and mu are constant on the window: checking the constant-alpha consequences");
                        b.report(&report);
                    }
                    None => b.note("lambda or mu varies on the window: constant-parameter consequences not applicable"),
                }
            }
            None => b.note("no concircular structure: the nabla Q formula is checked with alpha = 0"),
        }
        Ok(b.finish())
    }

    fn bounds_suite(&self) -> Result<Suite> {
        const NAME: &str = "bounds";
        let Some(p) = self.soliton.as_ref().filter(|p| p.has_potential()) else {
            return Ok(Builder::not_applicable(NAME, self.tol, "no potential function declared"));
        };
        let mut b = Builder::new(NAME, &self.points, self.tol);
        let bounds = self.each(NAME, |loc| ricci_norm_bounds(loc, p, self.tol))?;
        let col = |f: &dyn Fn(&soliton::Bounds) -> f64| bounds.iter().map(f).collect::<Vec<_>>();
        b.info("lower", &col(&|x| x.lower));
        b.info("mid", &col(&|x| x.mid));
        b.info("upper", &col(&|x| x.upper));
        b.info("einstein_upper", &col(&|x| x.einstein_upper));
        if bounds.iter().all(|x| x.constant_length.is_some()) {
            b.info("constant_length_lower", &col(&|x| x.constant_length.map_or(f64::NAN, |c| c.0)));
            b.info("constant_length_upper", &col(&|x| x.constant_length.map_or(f64::NAN, |c| c.1)));
        }
        b.residual(
            "bound_violation",
            &col(&|x| (x.lower - x.mid).max(x.mid - x.upper).max(0.0) / (1.0 + x.mid.abs())),
        );
        if self.geometry.at(self.points[0].as_slice()).map_err(suite_err(NAME))?.signature().1 > 0 {
            b.note("indefinite metric: the bounds are evaluated literally, violations are reported not assumed away");
        }
        Ok(b.finish())
    }

    fn bochner_suite(&self) -> Result<Suite> {
        const NAME: &str = "bochner";
        let Some(p) = self.soliton.as_ref().filter(|p| p.has_potential()) else {
            return Ok(Builder::not_applicable(NAME, self.tol, "no potential function declared"));
        };
        let mut b = Builder::new(NAME, &self.points, self.tol);
        let rows = self.each(NAME, |loc| Ok((trace_identity(loc, p)?, bochner_residual(loc, p)?)))?;
        b.residual("trace_identity", &rows.iter().map(|r| r.0).collect::<Vec<_>>());
        b.residual("bochner", &rows.iter().map(|r| r.1).collect::<Vec<_>>());
        b.report(&auxiliary_identities(&self.geometry, p, &self.points, self.tol).map_err(suite_err(NAME))?);
        Ok(b.finish())
    }
}

fn condition_columns(b: &mut Builder, out: &ConditionOutcome) {
    let name = out.name;
    b.info(&format!("{name}_hypothesis"), &out.hypothesis);
    b.info(&format!("{name}_proof_factor"), &out.proof_factor);
    b.info(&format!("{name}_conclusion"), &out.conclusion);
    b.residual(&format!("{name}_expansion"), &out.expansion);
    let agreement: Vec<f64> = out
        .tensor_factor
        .iter()
        .zip(&out.proof_factor)
        .map(|(t, p)| (t - p).abs() / (1.0 + p.abs()))
        .collect();
    b.residual(&format!("{name}_factor_agreement"), &agreement);
    b.verdict(name, out.verdict);
}

/// A fixed non-polynomial function of every coordinate, for the Hessian
/// symmetry check.
fn probe_function(geo: &Geometry) -> Expr {
    let names = geo.manifold().coord_names();
    let n = names.len();
    let terms: Vec<String> =
        (0..n).map(|i| format!("{}^2*{} + sin({})", names[i], names[(i + 1) % n], names[i])).collect();
    Symbols::new(&names).parse(&terms.join(" + ")).expect("probe parses")
}
