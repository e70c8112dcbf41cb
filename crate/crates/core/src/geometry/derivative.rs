use alloc::vec::Vec;

use super::local::Local;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::tensor::{for_each_index, Basis, Slot, TensorField, TensorValue};

/// Gradient, Hessian and Laplacian of a scalar field at a point.
#[derive(Clone, Debug)]
pub struct HessianPackage {
    pub value: f64,
    /// `df`.
    pub differential: TensorValue,
    /// `grad f = g^-1 df`.
    pub gradient: TensorValue,
    pub hessian: TensorValue,
    /// `trace_g Hess f`.
    pub laplacian: f64,
}

impl Local<'_> {
    fn check_dim(&self, t: &TensorValue) -> Result<()> {
        if t.dim() != self.dim() || t.basis() != Basis::Coordinate {
            return Err(Error::Shape(alloc::format!("tensor of dimension {} in {:?} basis", t.dim(), t.basis())));
        }
        Ok(())
    }

    /// `∇T` from coordinate components and their partials (`partials[m, ..]`).
    /// The derivative slot comes first.
    pub fn covariant_derivative_of(&self, value: &TensorValue, partials: &TensorValue) -> Result<TensorValue> {
        self.check_dim(value)?;
        let n = self.dim();
        let rank = value.rank();
        if partials.rank() != rank + 1 || partials.dim() != n {
            return Err(Error::Shape(alloc::format!("partials of rank {} for tensor of rank {rank}", partials.rank())));
        }
        let gam = self.christoffel();
        let mut slots = Vec::with_capacity(rank + 1);
        slots.push(Slot::Down);
        slots.extend_from_slice(value.slots());
        let mut src = alloc::vec![0usize; rank];
        Ok(TensorValue::from_fn(n, &slots, Basis::Coordinate, |idx| {
            let m = idx[0];
            let t = &idx[1..];
            let mut v = partials.get(idx);
            for s in 0..rank {
                src.copy_from_slice(t);
                for q in 0..n {
                    src[s] = q;
                    match value.slots()[s] {
                        Slot::Up => v += gam.get(&[t[s], m, q]) * value.get(&src),
                        Slot::Down => v -= gam.get(&[q, m, t[s]]) * value.get(&src),
                    }
                }
            }
            v
        }))
    }

    pub fn covariant_derivative(&self, field: &TensorField) -> Result<TensorValue> {
        let p = self.point();
        self.covariant_derivative_of(&field.value_at(p)?, &field.partials_at(p)?)
    }

    /// `∇S` with the derivative slot first.
    pub fn ricci_derivative(&self) -> Result<TensorValue> {
        self.covariant_derivative_of(self.ricci(), self.ricci_partials())
    }

    /// `(L_X g)_ij = g_jk ∇_i X^k + g_ik ∇_j X^k`.
    pub fn lie_derivative_metric(&self, x: &TensorField) -> Result<TensorValue> {
        let nx = self.covariant_derivative(x)?;
        let g = self.metric();
        let n = self.dim();
        Ok(TensorValue::from_fn(n, &[Slot::Down, Slot::Down], Basis::Coordinate, |ij| {
            let (i, j) = (ij[0], ij[1]);
            (0..n).map(|k| g.get(&[j, k]) * nx.get(&[i, k]) + g.get(&[i, k]) * nx.get(&[j, k])).sum()
        }))
    }

    /// Lie derivative by the coordinate formula; no connection involved.
    pub fn lie_derivative(&self, x: &TensorField, t: &TensorField) -> Result<TensorValue> {
        let p = self.point();
        let xv = x.value_at(p)?;
        let dx = x.partials_at(p)?; // [m, a] = d(X^a)/dx_m
        let tv = t.value_at(p)?;
        self.check_dim(&tv)?;
        let dt = t.partials_at(p)?;
        let n = self.dim();
        let rank = tv.rank();
        let mut src = alloc::vec![0usize; rank];
        let mut didx = alloc::vec![0usize; rank + 1];
        Ok(TensorValue::from_fn(n, tv.slots(), Basis::Coordinate, |idx| {
            let mut v = 0.0;
            for m in 0..n {
                didx[0] = m;
                didx[1..].copy_from_slice(idx);
                v += xv.get(&[m]) * dt.get(&didx);
            }
            for s in 0..rank {
                src.copy_from_slice(idx);
                for m in 0..n {
                    src[s] = m;
                    match tv.slots()[s] {
                        Slot::Up => v -= dx.get(&[m, idx[s]]) * tv.get(&src),
                        Slot::Down => v += dx.get(&[idx[s], m]) * tv.get(&src),
                    }
                }
            }
            v
        }))
    }

    pub fn hessian_package(&self, f: &Expr) -> Result<HessianPackage> {
        let n = self.dim();
        let scalar = TensorField::scalar(n, f.clone());
        let df = scalar.gradient_covector();
        let p = self.point();
        let differential = df.value_at(p)?;
        let hessian = self.covariant_derivative(&df)?;
        let laplacian = self.trace(&hessian);
        Ok(HessianPackage {
            value: scalar.value_at(p)?.data()[0],
            gradient: differential.raise(0, self.inverse_metric()),
            differential,
            hessian,
            laplacian,
        })
    }

    /// `g^ij T_ij` for a covariant 2-tensor.
    pub fn trace(&self, t: &TensorValue) -> f64 {
        let gi = self.inverse_metric();
        let mut acc = 0.0;
        for_each_index(self.dim(), 2, |ij| acc += gi.get(ij) * t.get(ij));
        acc
    }

    /// `(div T)_j = g^ik (∇T)[i, k, j]` given `∇T` of a covariant 2-tensor.
    pub fn divergence_sym2(&self, nabla_t: &TensorValue) -> TensorValue {
        let n = self.dim();
        let gi = self.inverse_metric();
        TensorValue::from_fn(n, &[Slot::Down], Basis::Coordinate, |j| {
            let mut acc = 0.0;
            for_each_index(n, 2, |ik| acc += gi.get(ik) * nabla_t.get(&[ik[0], ik[1], j[0]]));
            acc
        })
    }

    pub fn norm_sq(&self, t: &TensorValue) -> f64 {
        t.norm_sq(self.metric(), self.inverse_metric())
    }
}
