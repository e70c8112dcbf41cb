//! Dense tensors at a point and symbolic tensor fields in coordinates.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::expr::{eval_all, Expr};

/// Variance of one tensor slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    /// Contravariant.
    Up,
    /// Covariant.
    Down,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Basis {
    Coordinate,
    Frame,
}

/// Visits every multi-index of the given rank in row-major order.
pub fn for_each_index(dim: usize, rank: usize, mut f: impl FnMut(&[usize])) {
    let mut idx = vec![0usize; rank];
    let total = dim.pow(rank as u32);
    for _ in 0..total {
        f(&idx);
        for slot in (0..rank).rev() {
            idx[slot] += 1;
            if idx[slot] < dim {
                break;
            }
            idx[slot] = 0;
        }
    }
}

/// Largest absolute value; NaN if any value is NaN.
pub fn max_abs(values: &[f64]) -> f64 {
    let mut worst = 0.0f64;
    for v in values {
        if v.is_nan() {
            return f64::NAN;
        }
        worst = worst.max(libm::fabs(*v));
    }
    worst
}

fn offset(dim: usize, idx: &[usize]) -> usize {
    idx.iter().fold(0, |acc, &i| acc * dim + i)
}

/// Multi-index numeric array at a point, with per-slot variance.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorValue {
    dim: usize,
    slots: Vec<Slot>,
    basis: Basis,
    data: Vec<f64>,
}

impl TensorValue {
    pub fn zeros(dim: usize, slots: &[Slot], basis: Basis) -> TensorValue {
        TensorValue { dim, slots: slots.to_vec(), basis, data: vec![0.0; dim.pow(slots.len() as u32)] }
    }

    pub fn from_fn(dim: usize, slots: &[Slot], basis: Basis, mut f: impl FnMut(&[usize]) -> f64) -> TensorValue {
        let mut data = Vec::with_capacity(dim.pow(slots.len() as u32));
        for_each_index(dim, slots.len(), |idx| data.push(f(idx)));
        TensorValue { dim, slots: slots.to_vec(), basis, data }
    }

    pub fn from_data(dim: usize, slots: &[Slot], basis: Basis, data: Vec<f64>) -> Result<TensorValue> {
        if data.len() != dim.pow(slots.len() as u32) {
            return Err(Error::Shape(alloc::format!(
                "{} components for rank {} in dimension {dim}",
                data.len(),
                slots.len()
            )));
        }
        Ok(TensorValue { dim, slots: slots.to_vec(), basis, data })
    }

    pub fn scalar(value: f64, dim: usize, basis: Basis) -> TensorValue {
        TensorValue { dim, slots: Vec::new(), basis, data: vec![value] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn rank(&self) -> usize {
        self.slots.len()
    }

    /// `(contravariant, covariant)` slot counts.
    pub fn order(&self) -> (usize, usize) {
        let up = self.slots.iter().filter(|s| **s == Slot::Up).count();
        (up, self.slots.len() - up)
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        debug_assert_eq!(idx.len(), self.rank());
        self.data[offset(self.dim, idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: f64) {
        let o = offset(self.dim, idx);
        self.data[o] = v;
    }

    /// Largest absolute component; NaN if any component is NaN.
    pub fn max_abs(&self) -> f64 {
        max_abs(&self.data)
    }

    fn check_same_shape(&self, other: &TensorValue) -> Result<()> {
        if self.dim != other.dim || self.slots != other.slots || self.basis != other.basis {
            return Err(Error::Shape(alloc::format!(
                "{:?}/{:?} vs {:?}/{:?}",
                self.slots,
                self.basis,
                other.slots,
                other.basis
            )));
        }
        Ok(())
    }

    pub fn try_sub(&self, other: &TensorValue) -> Result<TensorValue> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(TensorValue { data, ..self.clone() })
    }

    pub fn try_add(&self, other: &TensorValue) -> Result<TensorValue> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(TensorValue { data, ..self.clone() })
    }

    pub fn scaled(&self, c: f64) -> TensorValue {
        TensorValue { data: self.data.iter().map(|v| c * v).collect(), ..self.clone() }
    }

    /// Largest `|T[.., i, .., j, ..] - T[.., j, .., i, ..]|` over the slot pair.
    pub fn max_asymmetry(&self, a: usize, b: usize) -> f64 {
        let mut worst = 0.0f64;
        let mut swapped = vec![0; self.rank()];
        for_each_index(self.dim, self.rank(), |idx| {
            swapped.copy_from_slice(idx);
            swapped.swap(a, b);
            worst = worst.max(libm::fabs(self.get(idx) - self.get(&swapped)));
        });
        worst
    }

    /// Contracts slot `slot` with the matrix `m` (row-major `dim x dim`):
    /// `out[.., a, ..] = sum_i m[i * dim + a] * T[.., i, ..]`.
    fn transform_slot(&self, slot: usize, m: &[f64], new_variance: Slot, basis: Basis) -> TensorValue {
        let mut slots = self.slots.clone();
        slots[slot] = new_variance;
        let mut src = vec![0; self.rank()];
        TensorValue::from_fn(self.dim, &slots, basis, |idx| {
            src.copy_from_slice(idx);
            let a = idx[slot];
            (0..self.dim)
                .map(|i| {
                    src[slot] = i;
                    m[i * self.dim + a] * self.get(&src)
                })
                .sum()
        })
    }

    /// Lowers slot `slot` using the covariant metric in the same basis.
    pub fn lower(&self, slot: usize, metric: &TensorValue) -> TensorValue {
        debug_assert_eq!(self.slots[slot], Slot::Up);
        self.transform_slot(slot, &metric.data, Slot::Down, self.basis)
    }

    /// Raises slot `slot` using the inverse metric in the same basis.
    pub fn raise(&self, slot: usize, inverse: &TensorValue) -> TensorValue {
        debug_assert_eq!(self.slots[slot], Slot::Down);
        self.transform_slot(slot, &inverse.data, Slot::Up, self.basis)
    }

    /// Re-expresses coordinate components in a frame. `vectors[i * n + a]` is
    /// the i-th coordinate component of frame vector `a`; `coframe[a * n + i]`
    /// its inverse.
    pub fn to_frame(&self, vectors: &[f64], coframe: &[f64]) -> TensorValue {
        if self.basis == Basis::Frame {
            return self.clone();
        }
        let n = self.dim;
        // coframe transposed so both cases read m[i * n + a]
        let mut cot = vec![0.0; n * n];
        for a in 0..n {
            for i in 0..n {
                cot[i * n + a] = coframe[a * n + i];
            }
        }
        let mut out = self.clone();
        for s in 0..self.rank() {
            out = match self.slots[s] {
                Slot::Down => out.transform_slot(s, vectors, Slot::Down, Basis::Frame),
                Slot::Up => out.transform_slot(s, &cot, Slot::Up, Basis::Frame),
            };
        }
        out.basis = Basis::Frame;
        out
    }

    /// Full contraction of the tensor with itself, every slot paired through
    /// the metric (covariant slots via `inverse`, contravariant via `metric`).
    /// Indefinite metrics make this a signed quantity.
    pub fn norm_sq(&self, metric: &TensorValue, inverse: &TensorValue) -> f64 {
        let mut raised = self.clone();
        for s in 0..self.rank() {
            raised = match self.slots[s] {
                Slot::Down => raised.raise(s, inverse),
                Slot::Up => raised.lower(s, metric),
            };
        }
        self.data.iter().zip(&raised.data).map(|(a, b)| a * b).sum()
    }
}

/// A tensor field given by coordinate-basis component expressions, together
/// with the exact partial derivatives of every component.
#[derive(Clone, Debug)]
pub struct TensorField {
    dim: usize,
    slots: Vec<Slot>,
    comps: Vec<Expr>,
    /// `partials[m * len + c]` is d(comps[c])/dx_m.
    partials: Vec<Expr>,
}

impl TensorField {
    pub fn new(dim: usize, slots: &[Slot], comps: Vec<Expr>) -> Result<TensorField> {
        let len = dim.pow(slots.len() as u32);
        if comps.len() != len {
            return Err(Error::Shape(alloc::format!(
                "{} component expressions for rank {} in dimension {dim}",
                comps.len(),
                slots.len()
            )));
        }
        let comps: Vec<Expr> = comps.iter().map(Expr::simplify).collect();
        let mut partials = Vec::with_capacity(dim * len);
        for m in 0..dim {
            partials.extend(comps.iter().map(|c| c.diff(m)));
        }
        Ok(TensorField { dim, slots: slots.to_vec(), comps, partials })
    }

    pub fn scalar(dim: usize, f: Expr) -> TensorField {
        TensorField::new(dim, &[], vec![f]).expect("one component")
    }

    pub fn vector(comps: Vec<Expr>) -> TensorField {
        let n = comps.len();
        TensorField::new(n, &[Slot::Up], comps).expect("n components")
    }

    pub fn covector(comps: Vec<Expr>) -> TensorField {
        let n = comps.len();
        TensorField::new(n, &[Slot::Down], comps).expect("n components")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn components(&self) -> &[Expr] {
        &self.comps
    }

    pub fn partial(&self, m: usize, c: usize) -> &Expr {
        &self.partials[m * self.comps.len() + c]
    }

    /// Exterior derivative of a scalar field as a covector field.
    pub fn gradient_covector(&self) -> TensorField {
        debug_assert!(self.slots.is_empty());
        TensorField::covector((0..self.dim).map(|m| self.partial(m, 0).clone()).collect())
    }

    pub fn value_at(&self, p: &[f64]) -> Result<TensorValue> {
        TensorValue::from_data(self.dim, &self.slots, Basis::Coordinate, eval_all(&self.comps, p)?)
    }

    /// Partial derivatives as a tensor with a leading covariant slot.
    pub fn partials_at(&self, p: &[f64]) -> Result<TensorValue> {
        let mut slots = vec![Slot::Down];
        slots.extend_from_slice(&self.slots);
        TensorValue::from_data(self.dim, &slots, Basis::Coordinate, eval_all(&self.partials, p)?)
    }
}
