use alloc::string::String;
use core::fmt;

use crate::expr::{EvalError, ParseError};

#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    Parse(ParseError),
    Eval(EvalError),
    /// Component or slot counts disagree with the manifold dimension.
    Shape(String),
    AsymmetricMetric { i: usize, j: usize },
    /// A domain constraint is (nearly) zero at the requested point.
    OutsideDomain { constraint: String, value: f64 },
    SingularMetric { det: f64 },
    FrameAbsent,
    DegenerateFrame,
    /// The vector field is not unit timelike: `g(xi, xi) != -1`.
    NotUnitTimelike { value: f64 },
    /// The extracted concircular factor vanishes somewhere.
    AlphaVanishes { value: f64 },
    NotConcircular { residual: f64 },
    AlphaMismatch { residual: f64 },
    SingularNormalEquations,
    PotentialAbsent,
    NotGradient { residual: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parse(e) => write!(f, "{e}"),
            Error::Eval(e) => write!(f, "{e}"),
            Error::Shape(msg) => write!(f, "shape mismatch: {msg}"),
            Error::AsymmetricMetric { i, j } => write!(f, "metric entries ({i},{j}) and ({j},{i}) differ"),
            Error::OutsideDomain { constraint, value } => {
                write!(f, "point violates domain constraint `{constraint} != 0` (value {value:e})")
            }
            Error::SingularMetric { det } => write!(f, "metric is singular (det = {det:e})"),
            Error::FrameAbsent => f.write_str("manifold has no frame"),
            Error::DegenerateFrame => f.write_str("frame vectors are linearly dependent at this point"),
            Error::NotUnitTimelike { value } => write!(f, "vector field is not unit timelike: g(xi,xi) = {value}"),
            Error::AlphaVanishes { value } => write!(f, "concircular factor alpha vanishes (alpha = {value:e})"),
            Error::NotConcircular { residual } => {
                write!(f, "vector field is not concircular (residual {residual:e})")
            }
            Error::AlphaMismatch { residual } => {
                write!(f, "declared alpha disagrees with the derived one (residual {residual:e})")
            }
            Error::SingularNormalEquations => f.write_str("least-squares normal equations are singular"),
            Error::PotentialAbsent => f.write_str("soliton has no potential function"),
            Error::NotGradient { residual } => {
                write!(f, "potential gradient differs from the vector field (residual {residual:e})")
            }
        }
    }
}

impl core::error::Error for Error {}

impl From<ParseError> for Error {
    fn from(e: ParseError) -> Self {
        Error::Parse(e)
    }
}

impl From<EvalError> for Error {
    fn from(e: EvalError) -> Self {
        Error::Eval(e)
    }
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
