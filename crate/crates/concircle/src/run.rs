//! One `run <command> <fixture>` invocation, independent of argument parsing.

use crate::error::{Error, Result};
use crate::file::ManifoldFile;
use crate::report::RunReport;
use crate::sampling::sample_points;
use crate::suites::{Command, Context};

#[derive(Clone, Debug, PartialEq)]
pub struct RunOptions {
    pub tol: f64,
    /// Overrides the fixture's seed.
    pub seed: Option<u64>,
    /// Overrides the fixture's number of pseudorandom points.
    pub points: Option<usize>,
    /// Coordinate range overrides.
    pub windows: Vec<(String, (f64, f64))>,
    /// Parameter overrides.
    pub params: Vec<(String, f64)>,
}

impl Default for RunOptions {
    fn default() -> RunOptions {
        RunOptions { tol: 1e-9, seed: None, points: None, windows: Vec::new(), params: Vec::new() }
    }
}

/// Loads a fixture file (or bundled fixture) and samples it.
pub fn prepare(fixture: &str, opts: &RunOptions) -> Result<Context> {
    let (origin, source) = crate::fixtures::resolve(fixture)?;
    let file = ManifoldFile::parse(&origin, &source)?;
    prepare_file(&file, opts)
}

pub fn prepare_file(file: &ManifoldFile, opts: &RunOptions) -> Result<Context> {
    if !(opts.tol > 0.0) {
        return Err(Error::Invalid(format!("tolerance must be positive, got {}", opts.tol)));
    }
    let mut spec = file.sampling.clone();
    if let Some(seed) = opts.seed {
        spec.seed = seed;
    }
    if let Some(count) = opts.points {
        spec.count = count;
    }
    for (coord, range) in &opts.windows {
        let i = file
            .coords
            .iter()
            .position(|c| c == coord)
            .ok_or_else(|| Error::Invalid(format!("--window: no coordinate named `{coord}`")))?;
        spec.ranges[i] = *range;
    }
    let model = file.build(&opts.params)?;
    let points = sample_points(model.geometry.manifold(), &spec)?;
    let mut ctx = Context::new(model, points, opts.tol)?;
    ctx.seed = spec.seed;
    Ok(ctx)
}

pub fn run(command: Command, fixture: &str, opts: &RunOptions) -> Result<RunReport> {
    let ctx = prepare(fixture, opts)?;
    run_context(command, &ctx)
}

pub fn run_context(command: Command, ctx: &Context) -> Result<RunReport> {
    let suites = ctx.run(command)?;
    let first = ctx.geometry.at(ctx.points[0].as_slice()).map_err(Error::Core)?;
    Ok(RunReport {
        fixture: ctx.geometry.manifold().name().to_string(),
        command: command.as_str().to_string(),
        seed: ctx.seed,
        tolerance: ctx.tol,
        points: ctx.points.len(),
        signature: first.signature(),
        suites,
    })
}
