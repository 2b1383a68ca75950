//! Exact algebra substrate: rationals, polynomials, rational functions,
//! vector fields and pointwise linear algebra.

pub mod linalg;
pub mod poly;
pub mod ratfn;
pub mod rational;
pub mod vf;

pub use poly::{gcd, Monomial, Poly};
pub use ratfn::RatFn;
pub use rational::{q, qf, Rational};
pub use vf::{lie_bracket, lie_derivative, pushforward_in_source, PolyVF, RatVF, Scalar, VectorField};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("operands have different arities")]
    ArityMismatch,
    #[error("denominator vanishes in component {0}")]
    DenominatorVanishes(usize),
    #[error("denominator is identically zero")]
    ZeroDenominator,
}

/// A point with exact coordinates.
pub type QPoint = Vec<Rational>;

/// The origin of `R^n`.
pub fn origin(n: usize) -> QPoint {
    vec![q(0); n]
}

/// Exact rank of the values of `fields` at `p`.
pub fn rank_at<S: Scalar>(fields: &[VectorField<S>], p: &[Rational]) -> Result<usize, SymError> {
    let rows = fields
        .iter()
        .map(|f| f.evaluate(p))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(linalg::rank(&rows))
}
