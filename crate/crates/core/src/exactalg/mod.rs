//! Exact scalar, polynomial, series, and interpolation kernel.
//!
//! Everything here is immutable after construction and arithmetic is exact:
//! coefficients are arbitrary-precision rationals, never floats.

mod interp;
mod poly;
mod series;
mod vars;

pub use interp::{eval_poly_at, fit_ratfn, interpolate_poly, nullspace_vector, RationalFn};
pub use poly::{Monomial, MultiPoly};
pub use series::TruncSeries;
pub use vars::VarId;

/// The universal scalar: arbitrary-precision rational, always in lowest terms
/// with positive denominator (maintained by `num-rational`).
pub type Rational = num_rational::BigRational;

/// Rational from a machine integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Rational `n / d`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub(crate) use poly::pow_rational;

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum Error {
    #[error("negative exponent {exp} on non-Laurent variable `{var}`")]
    NegativeExponent { var: String, exp: i32 },
    #[error("series variable mismatch: `{a}` vs `{b}`")]
    VariableMismatch { a: String, b: String },
    #[error("series constant term must be zero")]
    ConstantTermNotZero,
    #[error("series constant term must be one")]
    ConstantTermNotOne,
    #[error("series constant term is not invertible")]
    NonInvertibleConstant,
    #[error("coefficient index {k} out of range for series of order {order}")]
    CoeffOutOfRange { k: usize, order: usize },
    #[error("need at least {need} points, got {got}")]
    InsufficientPoints { got: usize, need: usize },
    #[error("duplicate abscissa {at}")]
    DuplicateAbscissa { at: String },
    #[error("interpolation validation failed at abscissa {at}")]
    InterpValidation { at: String },
    #[error("no nontrivial rational-function fit of the requested shape")]
    NoSolution,
    #[error("fitted denominator vanishes at sample point {at}")]
    DenominatorVanishes { at: String },
    #[error("rational-function fit fails to reproduce the point at {at}")]
    FitValidation { at: String },
    #[error("variable `{var}` has no assigned value")]
    UnboundVariable { var: String },
    #[error("division by zero during evaluation")]
    DivisionByZero,
}
