#![no_std]
// `!(x <= tol)` guards are deliberate: NaN must fail them.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod expr;
pub mod geometry;
pub mod lcs;
pub mod report;
pub mod soliton;
pub mod tensor;

pub use error::{Error, Result};
pub use expr::{Expr, Symbols};
pub use geometry::{ChartManifold, Frame, Geometry, Local, Point};
pub use lcs::LcsStructure;
pub use report::{Report, Residual};
pub use soliton::{Kind, SolitonParams, Verdict};
pub use tensor::{Basis, Slot, TensorField, TensorValue};
