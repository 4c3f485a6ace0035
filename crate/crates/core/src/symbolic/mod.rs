//! Exact arithmetic foundation: ℚ(i) coefficients, polynomials in
//! `(z, z̄, u)`, closed-form rational/log expressions and graded series.

mod gauss;
mod logexpr;
mod poly;
mod rat;
mod series;
pub mod terms;

use std::fmt;

use thiserror::Error;

pub use gauss::GaussRational;
pub use logexpr::{LogAtom, LogExpr, LogMono};
pub use poly::{mono_weight, Mono, Poly, Var};
pub use rat::{Factored, RatFn, SPoly};
pub use series::GradedSeries;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SymbolicError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("series with zero constant term is not invertible")]
    NonInvertibleSeries,
    #[error("derivative in {var:?} of an O(ρ^{order}) series carries no information")]
    OrderExhausted { order: u32, var: Var },
    #[error("not representable: {0}")]
    NonRepresentable(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Coefficient ring shared by forms, frames and operators: either exact
/// closed forms ([`LogExpr`]) or graded truncated series ([`GradedSeries`]).
pub trait Scalar: Clone + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn constant(c: GaussRational) -> Self;

    fn zero() -> Self {
        Self::constant(GaussRational::zero())
    }

    fn one() -> Self {
        Self::constant(GaussRational::one())
    }

    fn from_int(n: i64) -> Self {
        Self::constant(GaussRational::from_int(n))
    }

    fn from_poly(p: Poly) -> Self;

    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negated(&self) -> Self;
    fn scaled(&self, c: &GaussRational) -> Self;
    fn conj(&self) -> Self;
    fn diff(&self, v: Var) -> Result<Self, SymbolicError>;
    fn checked_div(&self, rhs: &Self) -> Result<Self, SymbolicError>;

    /// Exact zero (or zero up to the tracked error order for series).
    fn is_zero(&self) -> bool;

    /// Zero with no error term; storage decisions must use this rather
    /// than `is_zero`, which for series also accepts `0 + O(ρᵏ)`.
    fn is_exact_zero(&self) -> bool {
        self.is_zero()
    }

    fn recip(&self) -> Result<Self, SymbolicError> {
        Self::one().checked_div(self)
    }

    fn re(&self) -> Self {
        self.plus(&self.conj()).scaled(&GaussRational::ratio(1, 2))
    }

    fn im(&self) -> Self {
        self.minus(&self.conj()).scaled(&GaussRational::from_parts(0, 1, -1, 2))
    }

    fn square(&self) -> Self {
        self.times(self)
    }

    fn is_real(&self) -> bool {
        self.minus(&self.conj()).is_zero()
    }
}

impl Scalar for LogExpr {
    fn constant(c: GaussRational) -> Self {
        LogExpr::constant(c)
    }
    fn from_poly(p: Poly) -> Self {
        LogExpr::from_poly(p)
    }
    fn plus(&self, rhs: &Self) -> Self {
        LogExpr::plus(self, rhs)
    }
    fn minus(&self, rhs: &Self) -> Self {
        LogExpr::minus(self, rhs)
    }
    fn times(&self, rhs: &Self) -> Self {
        LogExpr::times(self, rhs)
    }
    fn negated(&self) -> Self {
        LogExpr::negated(self)
    }
    fn scaled(&self, c: &GaussRational) -> Self {
        LogExpr::scaled(self, c)
    }
    fn conj(&self) -> Self {
        LogExpr::conj(self)
    }
    fn diff(&self, v: Var) -> Result<Self, SymbolicError> {
        Ok(LogExpr::diff(self, v))
    }
    fn checked_div(&self, rhs: &Self) -> Result<Self, SymbolicError> {
        LogExpr::checked_div(self, rhs)
    }
    fn is_zero(&self) -> bool {
        LogExpr::is_zero(self)
    }
}

impl Scalar for GradedSeries {
    fn constant(c: GaussRational) -> Self {
        GradedSeries::constant(c)
    }
    fn from_poly(p: Poly) -> Self {
        GradedSeries::exact_unbounded(p)
    }
    fn plus(&self, rhs: &Self) -> Self {
        GradedSeries::plus(self, rhs)
    }
    fn minus(&self, rhs: &Self) -> Self {
        GradedSeries::minus(self, rhs)
    }
    fn times(&self, rhs: &Self) -> Self {
        GradedSeries::times(self, rhs)
    }
    fn negated(&self) -> Self {
        GradedSeries::negated(self)
    }
    fn scaled(&self, c: &GaussRational) -> Self {
        GradedSeries::scaled(self, c)
    }
    fn conj(&self) -> Self {
        GradedSeries::conj(self)
    }
    fn diff(&self, v: Var) -> Result<Self, SymbolicError> {
        GradedSeries::diff(self, v)
    }
    fn checked_div(&self, rhs: &Self) -> Result<Self, SymbolicError> {
        GradedSeries::checked_div(self, rhs)
    }
    fn is_zero(&self) -> bool {
        GradedSeries::is_zero(self)
    }
    fn is_exact_zero(&self) -> bool {
        GradedSeries::is_zero(self) && self.is_exact()
    }
}
