//! Run reports: a fixed conventions block plus suite tables, rendered as
//! text or JSON. Nothing time- or path-dependent is included, so identical
//! inputs give byte-identical output.

use std::fmt::Write;

use serde_json::{json, Map, Value};

use crate::suites::{Status, Suite};

pub const RIEMANN_CONVENTION: &str = "R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z; S(Y,Z) = tr(X -> R(X,Y)Z)";
pub const LAPLACIAN_CONVENTION: &str = "Delta f = tr_g Hess f";

#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub fixture: String,
    pub command: String,
    pub seed: u64,
    pub tolerance: f64,
    pub points: usize,
    /// `(positive, negative)` eigenvalue counts of the metric at the first sample.
    pub signature: (usize, usize),
    pub suites: Vec<Suite>,
}

fn signature_label((p, q): (usize, usize)) -> String {
    let signs: Vec<&str> = std::iter::repeat_n("+", p).chain(std::iter::repeat_n("-", q)).collect();
    format!("({})", signs.join(","))
}

fn sci(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else {
        format!("{v:.3e}")
    }
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(Suite::passed)
    }

    pub fn suite(&self, name: &str) -> Option<&Suite> {
        self.suites.iter().find(|s| s.name == name)
    }

    pub fn to_json(&self) -> Value {
        let suites: Vec<Value> = self.suites.iter().map(suite_json).collect();
        json!({
            "fixture": self.fixture,
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "seed": self.seed,
            "tolerance": self.tolerance,
            "points": self.points,
            "conventions": {
                "riemann_sign": RIEMANN_CONVENTION,
                "laplacian_sign": LAPLACIAN_CONVENTION,
                "signature": signature_label(self.signature),
            },
            "pass": self.passed(),
            "suites": suites,
        })
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("values serialise");
        s.push('\n');
        s
    }

    /// Summary text; `rows` adds the per-point tables.
    pub fn to_text(&self, rows: bool) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "concircle {}  fixture {}  command {}", env!("CARGO_PKG_VERSION"), self.fixture, self.command);
        let _ = writeln!(out, "conventions: {RIEMANN_CONVENTION}");
        let _ = writeln!(out, "             {LAPLACIAN_CONVENTION}; signature {}", signature_label(self.signature));
        let _ = writeln!(out, "points: {} (seed {}), tolerance {:e}", self.points, self.seed, self.tolerance);
        for s in &self.suites {
            let tag = match s.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::NotApplicable => "N/A ",
            };
            let _ = writeln!(out, "\n[{tag}] {}  max residual {}", s.name, sci(s.residual_max()));
            for c in &s.residuals {
                let mark = if c.pass { "" } else { "  <-- exceeds tolerance" };
                let _ = writeln!(out, "    {:<34} {:>11}{mark}", c.name, sci(c.max));
            }
            for (name, lo, hi) in &s.info {
                let _ = writeln!(out, "    {:<34} {:>11} .. {}", name, sci(*lo), sci(*hi));
            }
            for (name, v) in &s.verdicts {
                let _ = writeln!(out, "    {:<34} {v}", name);
            }
            for note in &s.notes {
                let _ = writeln!(out, "    note: {note}");
            }
            if rows && !s.rows.is_empty() {
                for r in &s.rows {
                    let point: Vec<String> = r.point.iter().map(|v| format!("{v:.6}")).collect();
                    let values: Vec<String> = r.values.iter().map(|(k, v)| format!("{k}={}", sci(*v))).collect();
                    let _ = writeln!(out, "      ({}) {}", point.join(", "), values.join(" "));
                }
            }
        }
        let _ = writeln!(out, "\noverall: {}", if self.passed() { "PASS" } else { "FAIL" });
        out
    }
}

fn suite_json(s: &Suite) -> Value {
    let residuals: Vec<Value> =
        s.residuals.iter().map(|c| json!({"name": c.name, "max": c.max, "pass": c.pass})).collect();
    let info: Vec<Value> = s.info.iter().map(|(n, lo, hi)| json!({"name": n, "min": lo, "max": hi})).collect();
    let verdicts: Vec<Value> = s.verdicts.iter().map(|(n, v)| json!({"name": n, "verdict": v})).collect();
    let rows: Vec<Value> = s
        .rows
        .iter()
        .map(|r| {
            let mut m = Map::new();
            m.insert("point".into(), json!(r.point));
            for (k, v) in &r.values {
                m.insert(k.clone(), json!(v));
            }
            Value::Object(m)
        })
        .collect();
    json!({
        "name": s.name,
        "status": s.status.as_str(),
        "pass": s.passed(),
        "residual_max": s.residual_max(),
        "tolerance": s.tolerance,
        "residuals": residuals,
        "info": info,
        "verdicts": verdicts,
        "notes": s.notes,
        "rows": rows,
    })
}
