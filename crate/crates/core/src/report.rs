//! Named residuals collected over sample points.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::tensor::max_abs;

/// One identity's residual at each sampled point.
#[derive(Clone, Debug, PartialEq)]
pub struct Residual {
    pub name: String,
    pub values: Vec<f64>,
}

impl Residual {
    /// Largest absolute value over points; NaN poisons the result.
    pub fn max(&self) -> f64 {
        max_abs(&self.values)
    }

    /// NaN never passes.
    pub fn passes(&self, tolerance: f64) -> bool {
        self.max() < tolerance
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub tolerance: f64,
    residuals: Vec<Residual>,
}

impl Report {
    pub fn new(tolerance: f64) -> Report {
        Report { tolerance, residuals: Vec::new() }
    }

    /// Appends `value` to the residual called `name`, creating it on first use.
    /// Insertion order of names is preserved.
    pub fn record(&mut self, name: &str, value: f64) {
        match self.residuals.iter_mut().find(|r| r.name == name) {
            Some(r) => r.values.push(value),
            None => self.residuals.push(Residual { name: name.to_string(), values: alloc::vec![value] }),
        }
    }

    pub fn residuals(&self) -> &[Residual] {
        &self.residuals
    }

    pub fn get(&self, name: &str) -> Option<&Residual> {
        self.residuals.iter().find(|r| r.name == name)
    }

    pub fn max_residual(&self) -> f64 {
        let maxima: Vec<f64> = self.residuals.iter().map(Residual::max).collect();
        max_abs(&maxima)
    }

    pub fn passed(&self) -> bool {
        self.residuals.iter().all(|r| r.passes(self.tolerance))
    }

    pub fn failures(&self) -> impl Iterator<Item = &Residual> {
        self.residuals.iter().filter(|r| !r.passes(self.tolerance))
    }

    pub fn merge(&mut self, other: Report) {
        for r in other.residuals {
            for v in r.values {
                self.record(&r.name, v);
            }
        }
    }
}
