//! The sectioned `key = "value"` manifold format.
//!
//! Parsing happens in two passes: [`ManifoldFile::parse`] checks the layout
//! and keeps every value with its line, [`ManifoldFile::build`] turns values
//! into expressions once parameter overrides are known.

use std::collections::BTreeMap;

use concircle_core::geometry::Frame;
use concircle_core::{ChartManifold, Expr, Geometry, Kind, Symbols};

use crate::error::{Error, Result};

/// A raw value and the line it came from.
#[derive(Clone, Debug, PartialEq)]
pub struct Entry {
    pub value: String,
    pub line: usize,
}

#[derive(Clone, Debug)]
pub struct FrameSpec {
    pub vectors: Vec<Entry>,
    pub signature: Entry,
}

#[derive(Clone, Debug)]
pub struct StructureSpec {
    pub xi: Entry,
    pub alpha: Option<Entry>,
}

#[derive(Clone, Debug)]
pub struct SolitonSpec {
    pub kind: Kind,
    pub lambda: Entry,
    pub mu: Entry,
    pub f: Option<Entry>,
    pub xi: Option<Entry>,
}

/// Sample window: a closed range per coordinate, grid resolution, number of
/// pseudorandom extra points and their seed.
#[derive(Clone, Debug, PartialEq)]
pub struct SamplingSpec {
    pub ranges: Vec<(f64, f64)>,
    pub grid: usize,
    pub count: usize,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct ManifoldFile {
    pub origin: String,
    pub name: String,
    pub coords: Vec<String>,
    pub domain: Option<Entry>,
    pub parameters: Vec<(String, Entry)>,
    /// `(i, j)` zero-based, as written.
    pub metric: BTreeMap<(usize, usize), Entry>,
    pub frame: Option<FrameSpec>,
    pub structure: Option<StructureSpec>,
    pub soliton: Option<SolitonSpec>,
    pub sampling: SamplingSpec,
}

const SECTIONS: &[&str] = &["manifold", "parameters", "metric", "frame", "structure", "soliton", "sampling"];

type Section = Vec<(String, Entry)>;

fn split_line(raw: &str) -> &str {
    let mut in_quotes = false;
    for (i, c) in raw.char_indices() {
        match c {
            '"' => in_quotes = !in_quotes,
            '#' if !in_quotes => return &raw[..i],
            _ => {}
        }
    }
    raw
}

fn unquote(v: &str) -> Option<&str> {
    let v = v.trim();
    match v.strip_prefix('"') {
        Some(rest) => rest.strip_suffix('"').filter(|inner| !inner.contains('"')),
        None => (!v.contains('"')).then_some(v),
    }
}

/// Comma-separated list inside one value.
pub fn split_list(v: &str) -> Vec<&str> {
    v.split(',').map(str::trim).collect()
}

impl ManifoldFile {
    pub fn parse(origin: &str, source: &str) -> Result<ManifoldFile> {
        let syntax = |line: usize, message: String| Error::Syntax { origin: origin.to_string(), line, message };
        let mut sections: BTreeMap<&'static str, Section> = BTreeMap::new();
        let mut current: Option<&'static str> = None;
        for (idx, raw) in source.lines().enumerate() {
            let line = idx + 1;
            let text = split_line(raw).trim();
            if text.is_empty() {
                continue;
            }
            if let Some(header) = text.strip_prefix('[') {
                let name = header.strip_suffix(']').ok_or_else(|| syntax(line, "unterminated section header".into()))?;
                let name = SECTIONS
                    .iter()
                    .find(|s| **s == name.trim())
                    .ok_or_else(|| syntax(line, format!("unknown section [{}]", name.trim())))?;
                if sections.contains_key(name) {
                    return Err(syntax(line, format!("section [{name}] appears twice")));
                }
                sections.insert(name, Vec::new());
                current = Some(name);
                continue;
            }
            let section = current.ok_or_else(|| syntax(line, "entry before any section header".into()))?;
            let (key, value) = text.split_once('=').ok_or_else(|| syntax(line, "expected `key = \"value\"`".into()))?;
            let key = key.trim();
            if key.is_empty() {
                return Err(syntax(line, "empty key".into()));
            }
            let value = unquote(value).ok_or_else(|| syntax(line, "malformed quoted value".into()))?;
            let entries = sections.get_mut(section).expect("inserted with header");
            if entries.iter().any(|(k, _)| k == key) {
                return Err(syntax(line, format!("key `{key}` repeated in [{section}]")));
            }
            entries.push((key.to_string(), Entry { value: value.to_string(), line }));
        }
        Reader { origin, sections }.finish()
    }

    /// Builds the chart with `overrides` replacing declared parameters.
    pub fn build(&self, overrides: &[(String, f64)]) -> Result<Model> {
        let mut symbols = Symbols::new(&self.coords);
        for (name, entry) in &self.parameters {
            let value = match overrides.iter().find(|(k, _)| k == name) {
                Some((_, v)) => decimal(*v).ok_or_else(|| Error::Invalid(format!("parameter {name} = {v} is not finite")))?,
                None => {
                    let e = self.expr(&symbols, entry)?;
                    if e.as_const().is_none() {
                        return Err(self.at_line(entry, format!("parameter {name} is not a constant")));
                    }
                    e
                }
            };
            symbols.define(name, value);
        }
        if let Some((name, _)) = overrides.iter().find(|(k, _)| !self.parameters.iter().any(|(p, _)| p == k)) {
            return Err(Error::Invalid(format!("{}: no parameter named `{name}`", self.origin)));
        }

        let n = self.coords.len();
        let mut metric = vec![Expr::zero(); n * n];
        for (&(i, j), entry) in &self.metric {
            let e = self.expr(&symbols, entry)?;
            metric[i * n + j] = e.clone();
            if !self.metric.contains_key(&(j, i)) {
                metric[j * n + i] = e;
            }
        }
        let mut manifold = ChartManifold::new(&self.name, symbols.clone(), metric).map_err(Error::Core)?;
        if let Some(domain) = &self.domain {
            manifold = manifold.with_domain(self.list(&symbols, domain, None)?);
        }
        if let Some(frame) = &self.frame {
            let vectors = frame.vectors.iter().map(|v| self.list(&symbols, v, Some(n))).collect::<Result<_>>()?;
            let signature = split_list(&frame.signature.value)
                .iter()
                .map(|s| s.parse::<f64>().map_err(|_| self.at_line(&frame.signature, format!("bad signature entry `{s}`"))))
                .collect::<Result<Vec<_>>>()?;
            if signature.len() != n {
                return Err(self.at_line(&frame.signature, format!("signature needs {n} entries")));
            }
            manifold = manifold.with_frame(Frame { vectors, signature }).map_err(Error::Core)?;
        }
        let geometry = Geometry::new(manifold).map_err(Error::Core)?;

        let structure = match &self.structure {
            Some(s) => Some(StructureExprs {
                xi: self.list(&symbols, &s.xi, Some(n))?,
                alpha: s.alpha.as_ref().map(|a| self.expr(&symbols, a)).transpose()?,
            }),
            None => None,
        };
        let soliton = match &self.soliton {
            Some(s) => Some(SolitonExprs {
                kind: s.kind,
                lambda: self.expr(&symbols, &s.lambda)?,
                mu: self.expr(&symbols, &s.mu)?,
                f: s.f.as_ref().map(|f| self.expr(&symbols, f)).transpose()?,
                xi: s.xi.as_ref().map(|x| self.list(&symbols, x, Some(n))).transpose()?,
            }),
            None => None,
        };
        Ok(Model { geometry, structure, soliton })
    }

    fn at_line(&self, entry: &Entry, message: String) -> Error {
        Error::Syntax { origin: self.origin.clone(), line: entry.line, message }
    }

    fn expr(&self, symbols: &Symbols, entry: &Entry) -> Result<Expr> {
        symbols.parse(&entry.value).map_err(|e| self.at_line(entry, e.to_string()))
    }

    fn list(&self, symbols: &Symbols, entry: &Entry, len: Option<usize>) -> Result<Vec<Expr>> {
        let parts = split_list(&entry.value);
        if let Some(len) = len {
            if parts.len() != len {
                return Err(self.at_line(entry, format!("expected {len} components, found {}", parts.len())));
            }
        }
        parts
            .iter()
            .map(|p| symbols.parse(p).map_err(|e| self.at_line(entry, format!("`{p}`: {e}"))))
            .collect()
    }
}

/// Exact rational for a finite decimal value.
fn decimal(v: f64) -> Option<Expr> {
    if !v.is_finite() {
        return None;
    }
    let text = format!("{v:?}");
    if !text.contains('e') {
        if let Ok(e) = Symbols::new::<&str>(&[]).parse(&text) {
            return Some(e);
        }
    }
    Some(Expr::rational(concircle_core::expr::Rational::approximate_float(v)?))
}

/// Expressions of the optional sections, parsed against the chart.
#[derive(Clone, Debug)]
pub struct StructureExprs {
    pub xi: Vec<Expr>,
    pub alpha: Option<Expr>,
}

#[derive(Clone, Debug)]
pub struct SolitonExprs {
    pub kind: Kind,
    pub lambda: Expr,
    pub mu: Expr,
    pub f: Option<Expr>,
    pub xi: Option<Vec<Expr>>,
}

#[derive(Debug)]
pub struct Model {
    pub geometry: Geometry,
    pub structure: Option<StructureExprs>,
    pub soliton: Option<SolitonExprs>,
}

struct Reader<'a> {
    origin: &'a str,
    sections: BTreeMap<&'static str, Section>,
}

impl Reader<'_> {
    fn err(&self, line: usize, message: String) -> Error {
        Error::Syntax { origin: self.origin.to_string(), line, message }
    }

    /// Removes and returns the section, rejecting keys outside `allowed`
    /// (a trailing `*` matches any suffix).
    fn take(&mut self, name: &str, allowed: &[&str]) -> Result<Option<Section>> {
        let Some(entries) = self.sections.remove(name) else { return Ok(None) };
        for (key, entry) in &entries {
            let ok = allowed.iter().any(|a| match a.strip_suffix('*') {
                Some(prefix) => key.starts_with(prefix),
                None => a == key,
            });
            if !ok {
                return Err(self.err(entry.line, format!("unknown key `{key}` in [{name}]")));
            }
        }
        Ok(Some(entries))
    }

    fn finish(mut self) -> Result<ManifoldFile> {
        let manifold = self
            .take("manifold", &["name", "dim", "coords", "domain"])?
            .ok_or_else(|| self.err(1, "missing [manifold] section".into()))?;
        let get = |s: &Section, k: &str| s.iter().find(|(key, _)| key == k).map(|(_, e)| e.clone());
        let name = get(&manifold, "name").ok_or_else(|| self.err(1, "[manifold] needs `name`".into()))?;
        let coords_entry = get(&manifold, "coords").ok_or_else(|| self.err(1, "[manifold] needs `coords`".into()))?;
        let coords: Vec<String> = split_list(&coords_entry.value).into_iter().map(str::to_string).collect();
        if coords.iter().any(|c| c.is_empty() || !c.chars().all(|ch| ch.is_alphanumeric() || ch == '_')) {
            return Err(self.err(coords_entry.line, "coordinates must be identifiers".into()));
        }
        for (i, c) in coords.iter().enumerate() {
            if coords[..i].contains(c) {
                return Err(self.err(coords_entry.line, format!("coordinate `{c}` declared twice")));
            }
        }
        let n = coords.len();
        if let Some(dim) = get(&manifold, "dim") {
            let d: usize = dim.value.parse().map_err(|_| self.err(dim.line, "dim must be an integer".into()))?;
            if d != n {
                return Err(self.err(dim.line, format!("dim = {d} but {n} coordinates are declared")));
            }
        }
        if n < 2 {
            return Err(self.err(coords_entry.line, "at least two coordinates are required".into()));
        }

        let parameters = self.take("parameters", &["*"])?.unwrap_or_default();
        for (key, entry) in &parameters {
            if coords.contains(key) {
                return Err(self.err(entry.line, format!("parameter `{key}` shadows a coordinate")));
            }
        }

        let metric_entries =
            self.take("metric", &["g_*"])?.ok_or_else(|| self.err(1, "missing [metric] section".into()))?;
        let mut metric = BTreeMap::new();
        for (key, entry) in metric_entries {
            let (i, j) = metric_index(&key[2..]).ok_or_else(|| self.err(entry.line, format!("bad metric key `{key}`")))?;
            if !(1..=n).contains(&i) || !(1..=n).contains(&j) {
                return Err(self.err(entry.line, format!("metric index ({i},{j}) outside 1..{n}")));
            }
            metric.insert((i - 1, j - 1), entry);
        }
        for i in 0..n {
            if !metric.contains_key(&(i, i)) {
                return Err(self.err(1, format!("missing diagonal metric entry g_{0}{0}", i + 1)));
            }
        }

        let frame = match self.take("frame", &["E_*", "signature"])? {
            Some(entries) => {
                let mut vectors = vec![None; n];
                let mut signature = None;
                for (key, entry) in entries {
                    if key == "signature" {
                        signature = Some(entry);
                        continue;
                    }
                    let k: usize = key[2..].parse().map_err(|_| self.err(entry.line, format!("bad frame key `{key}`")))?;
                    if !(1..=n).contains(&k) {
                        return Err(self.err(entry.line, format!("frame index {k} outside 1..{n}")));
                    }
                    vectors[k - 1] = Some(entry);
                }
                let vectors = vectors
                    .into_iter()
                    .enumerate()
                    .map(|(k, v)| v.ok_or_else(|| self.err(1, format!("[frame] is missing E_{}", k + 1))))
                    .collect::<Result<Vec<_>>>()?;
                let signature = signature.ok_or_else(|| self.err(1, "[frame] needs `signature`".into()))?;
                Some(FrameSpec { vectors, signature })
            }
            None => None,
        };

        let structure = match self.take("structure", &["xi", "alpha"])? {
            Some(s) => Some(StructureSpec {
                xi: get(&s, "xi").ok_or_else(|| self.err(1, "[structure] needs `xi`".into()))?,
                alpha: get(&s, "alpha"),
            }),
            None => None,
        };

        let soliton = match self.take("soliton", &["kind", "lambda", "mu", "f", "xi"])? {
            Some(s) => {
                let kind = match get(&s, "kind") {
                    None => Kind::EtaRicci,
                    Some(e) => match e.value.as_str() {
                        "eta-ricci" => Kind::EtaRicci,
                        "eta-einstein" => Kind::EtaEinstein,
                        other => return Err(self.err(e.line, format!("unknown soliton kind `{other}`"))),
                    },
                };
                Some(SolitonSpec {
                    kind,
                    lambda: get(&s, "lambda").ok_or_else(|| self.err(1, "[soliton] needs `lambda`".into()))?,
                    mu: get(&s, "mu").ok_or_else(|| self.err(1, "[soliton] needs `mu`".into()))?,
                    f: get(&s, "f"),
                    xi: get(&s, "xi"),
                })
            }
            None => None,
        };

        let mut sampling = SamplingSpec { ranges: vec![(-1.0, 1.0); n], grid: 3, count: 8, seed: 0 };
        if let Some(entries) = self.sections.remove("sampling") {
            for (key, entry) in entries {
                let int = |what: &str| -> Result<u64> {
                    entry.value.parse().map_err(|_| self.err(entry.line, format!("{what} must be a non-negative integer")))
                };
                match key.as_str() {
                    "grid" => sampling.grid = int("grid")? as usize,
                    "count" => sampling.count = int("count")? as usize,
                    "seed" => sampling.seed = int("seed")?,
                    coord => {
                        let i = coords
                            .iter()
                            .position(|c| c == coord)
                            .ok_or_else(|| self.err(entry.line, format!("unknown key `{coord}` in [sampling]")))?;
                        sampling.ranges[i] =
                            parse_range(&entry.value).ok_or_else(|| self.err(entry.line, "expected `lo, hi` with lo <= hi".into()))?;
                    }
                }
            }
        }

        Ok(ManifoldFile {
            origin: self.origin.to_string(),
            name: name.value,
            coords,
            domain: get(&manifold, "domain"),
            parameters,
            metric,
            frame,
            structure,
            soliton,
            sampling,
        })
    }
}

/// `ij` (single digits) or `i_j`, one-based.
fn metric_index(s: &str) -> Option<(usize, usize)> {
    if let Some((a, b)) = s.split_once('_') {
        return Some((a.parse().ok()?, b.parse().ok()?));
    }
    let digits: Vec<usize> = s.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect::<Option<_>>()?;
    match digits[..] {
        [i, j] => Some((i, j)),
        _ => None,
    }
}

/// `lo, hi` or `lo:hi`.
pub fn parse_range(s: &str) -> Option<(f64, f64)> {
    let (a, b) = s.split_once(',').or_else(|| s.split_once(':'))?;
    let (lo, hi): (f64, f64) = (a.trim().parse().ok()?, b.trim().parse().ok()?);
    (lo.is_finite() && hi.is_finite() && lo <= hi).then_some((lo, hi))
}
