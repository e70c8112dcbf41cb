use alloc::vec::Vec;

use super::local::{invert, Local};
use super::FrameFields;
use crate::error::{Error, Result};
use crate::tensor::{Basis, Slot, TensorValue};

/// A frame evaluated at one point.
#[derive(Clone, Debug)]
pub struct FrameAt {
    n: usize,
    /// `vectors[i * n + a]` = E_a^i.
    vectors: Vec<f64>,
    /// `coframe[a * n + i]`: the dual basis, inverse of `vectors`.
    coframe: Vec<f64>,
    /// `[m, i, a]` = d(E_a^i)/dx_m.
    vector_partials: TensorValue,
    gram: TensorValue,
    /// `[m, a, b]` = d(G_ab)/dx_m.
    gram_partials: TensorValue,
    gram_inverse: Vec<f64>,
    signature: Vec<f64>,
}

impl FrameAt {
    pub(super) fn new(fields: &FrameFields, p: &[f64]) -> Result<FrameAt> {
        let n = fields.vectors.dim();
        let vectors = fields.vectors.value_at(p)?.data().to_vec();
        let coframe = invert(n, &vectors).map(|(c, _)| c).ok_or(Error::DegenerateFrame)?;
        let gram = fields.gram.value_at(p)?;
        let gram_inverse = invert(n, gram.data()).map(|(c, _)| c).ok_or(Error::DegenerateFrame)?;
        Ok(FrameAt {
            n,
            vectors,
            coframe,
            vector_partials: fields.vectors.partials_at(p)?,
            gram: TensorValue::from_data(n, &[Slot::Down, Slot::Down], Basis::Frame, gram.data().to_vec())?,
            gram_partials: fields.gram.partials_at(p)?,
            gram_inverse,
            signature: fields.signature.clone(),
        })
    }

    pub fn vectors(&self) -> &[f64] {
        &self.vectors
    }

    pub fn coframe(&self) -> &[f64] {
        &self.coframe
    }

    /// Coordinate components of frame vector `a`.
    pub fn vector(&self, a: usize) -> Vec<f64> {
        (0..self.n).map(|i| self.vectors[i * self.n + a]).collect()
    }

    /// `G_ab = g(E_a, E_b)`.
    pub fn gram(&self) -> &TensorValue {
        &self.gram
    }

    pub fn signature(&self) -> &[f64] {
        &self.signature
    }

    /// Largest deviation of the gram matrix from the declared signature.
    pub fn orthonormality_defect(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                let want = if a == b { self.signature[a] } else { 0.0 };
                worst = worst.max(libm::fabs(self.gram.get(&[a, b]) - want));
            }
        }
        worst
    }

    /// Converts coordinate-basis components to frame components.
    pub fn express(&self, t: &TensorValue) -> TensorValue {
        t.to_frame(&self.vectors, &self.coframe)
    }

    /// Coordinate components of `[E_a, E_b]`.
    fn bracket(&self, a: usize, b: usize) -> Vec<f64> {
        let n = self.n;
        (0..n)
            .map(|k| {
                (0..n)
                    .map(|m| {
                        self.vectors[m * n + a] * self.vector_partials.get(&[m, k, b])
                            - self.vectors[m * n + b] * self.vector_partials.get(&[m, k, a])
                    })
                    .sum()
            })
            .collect()
    }

    /// `E_a(G_bc)`.
    fn gram_derivative(&self, a: usize, b: usize, c: usize) -> f64 {
        (0..self.n).map(|m| self.vectors[m * self.n + a] * self.gram_partials.get(&[m, b, c])).sum()
    }
}

impl Local<'_> {
    fn require_frame(&self) -> Result<&FrameAt> {
        self.frame().ok_or(Error::FrameAbsent)
    }

    /// Connection coefficients in the frame from the Koszul formula:
    /// `∇_{E_a} E_b = ω[a, b, c] E_c`. Not a tensor; stored in one for
    /// convenience.
    pub fn frame_connection(&self) -> Result<TensorValue> {
        let f = self.require_frame()?;
        let n = self.dim();
        let mut brackets = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                brackets.push(f.bracket(a, b));
            }
        }
        // g([E_a, E_b], E_c)
        let gb = |a: usize, b: usize, c: usize| self.inner(&brackets[a * n + b], &f.vector(c));
        let koszul = |a: usize, b: usize, d: usize| {
            f.gram_derivative(a, b, d) + f.gram_derivative(b, a, d) - f.gram_derivative(d, a, b) + gb(a, b, d)
                - gb(a, d, b)
                - gb(b, d, a)
        };
        let slots = [Slot::Down, Slot::Down, Slot::Up];
        Ok(TensorValue::from_fn(n, &slots, Basis::Frame, |idx| {
            let (a, b, c) = (idx[0], idx[1], idx[2]);
            0.5 * (0..n).map(|d| f.gram_inverse[c * n + d] * koszul(a, b, d)).sum::<f64>()
        }))
    }

    /// The same coefficients computed from the coordinate Christoffel symbols:
    /// `ω[a, b, c] = θ^c(E_a^i (∂_i E_b^k + Γ^k_ij E_b^j) ∂_k)`.
    pub fn frame_connection_from_christoffel(&self) -> Result<TensorValue> {
        let f = self.require_frame()?;
        let n = self.dim();
        let gam = self.christoffel();
        let slots = [Slot::Down, Slot::Down, Slot::Up];
        Ok(TensorValue::from_fn(n, &slots, Basis::Frame, |idx| {
            let (a, b, c) = (idx[0], idx[1], idx[2]);
            let mut acc = 0.0;
            for k in 0..n {
                let mut nab = 0.0;
                for i in 0..n {
                    let ea = f.vectors[i * n + a];
                    nab += ea * f.vector_partials.get(&[i, k, b]);
                    for j in 0..n {
                        nab += ea * gam.get(&[k, i, j]) * f.vectors[j * n + b];
                    }
                }
                acc += f.coframe[c * n + k] * nab;
            }
            acc
        }))
    }
}
