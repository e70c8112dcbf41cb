//! Deterministic sample points: a regular grid over the window plus
//! pseudorandom points from a seeded ChaCha stream.

use concircle_core::{ChartManifold, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::file::SamplingSpec;

fn grid_axis(lo: f64, hi: f64, k: usize) -> Vec<f64> {
    match k {
        0 => Vec::new(),
        1 => vec![0.5 * (lo + hi)],
        _ => (0..k).map(|i| lo + (hi - lo) * i as f64 / (k - 1) as f64).collect(),
    }
}

/// `grid^dim` grid points then `count` random ones. Every point must clear
/// the domain constraints by the engine margin, and no constraint may change
/// sign over the samples (a sign change means the window straddles a
/// singular locus even if no sample lands on it).
pub fn sample_points(manifold: &ChartManifold, spec: &SamplingSpec) -> Result<Vec<Point>> {
    let n = manifold.dim();
    if spec.ranges.len() != n {
        return Err(Error::Sampling(format!("{} ranges for {n} coordinates", spec.ranges.len())));
    }
    let mut points = Vec::new();
    let axes: Vec<Vec<f64>> = spec.ranges.iter().map(|&(lo, hi)| grid_axis(lo, hi, spec.grid)).collect();
    if spec.grid > 0 {
        let total = spec.grid.pow(n as u32);
        for mut k in 0..total {
            let mut p = vec![0.0; n];
            for i in (0..n).rev() {
                p[i] = axes[i][k % spec.grid];
                k /= spec.grid;
            }
            points.push(Point(p));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    for _ in 0..spec.count {
        points.push(Point(spec.ranges.iter().map(|&(lo, hi)| if lo < hi { rng.random_range(lo..hi) } else { lo }).collect()));
    }
    if points.is_empty() {
        return Err(Error::Sampling("empty sample set".into()));
    }
    for p in &points {
        manifold.check_point(p.as_slice()).map_err(|e| Error::Sampling(format!("constraint margin violated: {e}")))?;
    }
    for c in manifold.domain() {
        let mut signs = points.iter().map(|p| c.eval(p.as_slice()).map(|v| v > 0.0));
        let first = signs.next().expect("non-empty").map_err(|e| Error::Sampling(e.to_string()))?;
        for s in signs {
            if s.map_err(|e| Error::Sampling(e.to_string()))? != first {
                return Err(Error::Sampling(format!("constraint `{}` changes sign over the window", c.to_source())));
            }
        }
    }
    Ok(points)
}
