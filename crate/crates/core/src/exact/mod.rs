//! Exact coefficient domains: rationals, sparse multivariate polynomials and
//! normalized rational functions.

mod poly;
mod rational;
mod ratfunc;
mod symbol;

use std::fmt;

use thiserror::Error;

pub use poly::{gcd, Monomial, MultiPoly};
pub use ratfunc::RatFunc;
pub use rational::Rational;
pub use symbol::Symbol;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("denominator vanishes at the evaluation point")]
    Pole,
    #[error("division is not exact")]
    NotExact,
    #[error("parse error: {0}")]
    Parse(String),
}

/// Coefficient field used by every operator in the crate.
///
/// Method names avoid the `std::ops` names so that types implementing both
/// never hit ambiguous method resolution.
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn divide(&self, other: &Self) -> Result<Self, ExactError>;
    /// Canonical text used in JSON exports.
    fn to_export_string(&self) -> String;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(&Rational::integer(v))
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

impl Scalar for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn divide(&self, other: &Self) -> Result<Self, ExactError> {
        self.checked_div(other)
    }
    fn to_export_string(&self) -> String {
        Rational::to_export_string(self)
    }
}

impl Scalar for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn one() -> Self {
        RatFunc::one()
    }
    fn from_rational(r: &Rational) -> Self {
        RatFunc::constant(r.clone())
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn minus(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    fn divide(&self, other: &Self) -> Result<Self, ExactError> {
        self.div(other)
    }
    fn to_export_string(&self) -> String {
        self.to_string()
    }
}
