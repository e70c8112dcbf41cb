use alloc::vec::Vec;

use nalgebra::DMatrix;

use super::frame::FrameAt;
use super::Geometry;
use crate::error::{Error, Result};
use crate::expr::eval_all;
use crate::tensor::{for_each_index, Basis, Slot, TensorValue};

/// Every curvature quantity of a [`Geometry`] evaluated at one point.
#[derive(Clone, Debug)]
pub struct Local<'g> {
    pub(super) geometry: &'g Geometry,
    point: Vec<f64>,
    metric: TensorValue,
    inverse: TensorValue,
    christoffel: TensorValue,
    /// `[m, k, i, j]` = d(Γ^k_ij)/dx_m.
    christoffel_partials: TensorValue,
    riemann: TensorValue,
    riemann_down: TensorValue,
    ricci: TensorValue,
    ricci_partials: TensorValue,
    scalar: f64,
    scalar_gradient: TensorValue,
    frame: Option<FrameAt>,
}

/// Numeric inverse of a square matrix stored row-major.
pub(crate) fn invert(n: usize, data: &[f64]) -> Option<(Vec<f64>, f64)> {
    let m = DMatrix::from_row_slice(n, n, data);
    let det = m.determinant();
    let inv = m.try_inverse()?;
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            out.push(inv[(i, j)]);
        }
    }
    out.iter().all(|v| v.is_finite()).then_some((out, det))
}

impl<'g> Local<'g> {
    pub(super) fn new(geometry: &'g Geometry, p: &[f64]) -> Result<Local<'g>> {
        geometry.manifold.check_point(p)?;
        let n = geometry.dim();
        let metric = geometry.metric.value_at(p)?;
        let (inv, det) = match invert(n, metric.data()) {
            Some(r) => r,
            None => return Err(Error::SingularMetric { det: 0.0 }),
        };
        if libm::fabs(det) < 1e-300 {
            return Err(Error::SingularMetric { det });
        }
        let inverse = TensorValue::from_data(n, &[Slot::Up, Slot::Up], Basis::Coordinate, inv)?;
        let christoffel = geometry.christoffel.value_at(p)?;
        let christoffel_partials = geometry.christoffel.partials_at(p)?;

        let gam = |k: usize, i: usize, j: usize| christoffel.get(&[k, i, j]);
        let dgam = |m: usize, k: usize, i: usize, j: usize| christoffel_partials.get(&[m, k, i, j]);
        let up = [Slot::Up, Slot::Down, Slot::Down, Slot::Down];
        let riemann = TensorValue::from_fn(n, &up, Basis::Coordinate, |idx| {
            let (l, i, j, k) = (idx[0], idx[1], idx[2], idx[3]);
            let mut v = dgam(i, l, j, k) - dgam(j, l, i, k);
            for m in 0..n {
                v += gam(m, j, k) * gam(l, i, m) - gam(m, i, k) * gam(l, j, m);
            }
            v
        });
        let riemann_down = TensorValue::from_fn(n, &[Slot::Down; 4], Basis::Coordinate, |idx| {
            (0..n).map(|m| metric.get(&[idx[3], m]) * riemann.get(&[m, idx[0], idx[1], idx[2]])).sum()
        });

        let ricci = geometry.ricci.value_at(p)?;
        let ricci_partials = geometry.ricci.partials_at(p)?;
        let scalar = geometry.scalar.value_at(p)?.data()[0];
        let scalar_gradient = geometry.scalar.partials_at(p)?;

        let frame = match &geometry.frame {
            Some(fields) => Some(FrameAt::new(fields, p)?),
            None => None,
        };

        Ok(Local {
            geometry,
            point: p.to_vec(),
            metric,
            inverse,
            christoffel,
            christoffel_partials,
            riemann,
            riemann_down,
            ricci,
            ricci_partials,
            scalar,
            scalar_gradient,
            frame,
        })
    }

    pub fn geometry(&self) -> &'g Geometry {
        self.geometry
    }

    pub fn dim(&self) -> usize {
        self.metric.dim()
    }

    pub fn point(&self) -> &[f64] {
        &self.point
    }

    pub fn metric(&self) -> &TensorValue {
        &self.metric
    }

    pub fn inverse_metric(&self) -> &TensorValue {
        &self.inverse
    }

    /// Numbers of positive and negative eigenvalues of the metric.
    pub fn signature(&self) -> (usize, usize) {
        let n = self.dim();
        let eig = DMatrix::from_row_slice(n, n, self.metric.data()).symmetric_eigenvalues();
        (eig.iter().filter(|v| **v > 0.0).count(), eig.iter().filter(|v| **v < 0.0).count())
    }

    /// `Γ^k_ij` stored at `[k, i, j]`.
    pub fn christoffel(&self) -> &TensorValue {
        &self.christoffel
    }

    pub fn christoffel_partials(&self) -> &TensorValue {
        &self.christoffel_partials
    }

    /// `R^l_ijk` at `[l, i, j, k]`: the `∂_l` component of `R(∂_i, ∂_j)∂_k`.
    pub fn riemann(&self) -> &TensorValue {
        &self.riemann
    }

    /// `R_ijkl = g(R(∂_i, ∂_j)∂_k, ∂_l)`.
    pub fn riemann_down(&self) -> &TensorValue {
        &self.riemann_down
    }

    pub fn ricci(&self) -> &TensorValue {
        &self.ricci
    }

    /// `[m, j, k]` = d(S_jk)/dx_m.
    pub fn ricci_partials(&self) -> &TensorValue {
        &self.ricci_partials
    }

    pub fn scalar_curvature(&self) -> f64 {
        self.scalar
    }

    /// `d scal` as a covector.
    pub fn scalar_gradient(&self) -> &TensorValue {
        &self.scalar_gradient
    }

    /// Ricci operator `Q^i_j = g^ik S_kj`.
    pub fn ricci_operator(&self) -> TensorValue {
        self.ricci.raise(0, &self.inverse)
    }

    pub fn frame(&self) -> Option<&FrameAt> {
        self.frame.as_ref()
    }

    /// Components in the frame if one is declared, else unchanged.
    pub fn preferred(&self, t: &TensorValue) -> TensorValue {
        match &self.frame {
            Some(f) => f.express(t),
            None => t.clone(),
        }
    }

    /// `g(u, v)` for coordinate vectors.
    pub fn inner(&self, u: &[f64], v: &[f64]) -> f64 {
        let n = self.dim();
        let mut acc = 0.0;
        for_each_index(n, 2, |ij| acc += self.metric.get(ij) * u[ij[0]] * v[ij[1]]);
        acc
    }

    /// `R(u, v)w` for coordinate vectors.
    pub fn curvature_apply(&self, u: &[f64], v: &[f64], w: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let mut out = alloc::vec![0.0; n];
        for_each_index(n, 4, |idx| {
            out[idx[0]] += self.riemann.get(idx) * u[idx[1]] * v[idx[2]] * w[idx[3]];
        });
        out
    }

    /// `S(u, v)` for coordinate vectors.
    pub fn ricci_apply(&self, u: &[f64], v: &[f64]) -> f64 {
        let n = self.dim();
        let mut acc = 0.0;
        for_each_index(n, 2, |ij| acc += self.ricci.get(ij) * u[ij[0]] * v[ij[1]]);
        acc
    }

    /// Evaluates expressions at this point.
    pub fn eval(&self, exprs: &[crate::expr::Expr]) -> Result<Vec<f64>> {
        Ok(eval_all(exprs, &self.point)?)
    }
}
