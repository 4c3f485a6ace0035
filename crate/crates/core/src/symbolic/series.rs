//! Truncated polynomials in `(z, z̄, u)` with an explicit anisotropic error
//! order: a value `p + O(ρᵏ)`.
//!
//! An exact value (no error term) carries a *horizon*: the weighted order to
//! truncate at when an operation such as inversion can no longer be carried
//! out exactly. Error orders are propagated conservatively.

use std::fmt;

use super::{GaussRational, Poly, SymbolicError, Var};

/// Marker for "no error term" / "no horizon".
const INF: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSeries {
    poly: Poly,
    /// `INF` for exact values.
    order: u32,
    /// Truncation order used when an exact value must be inverted.
    horizon: u32,
}

fn add_orders(a: u32, b: u32) -> u32 {
    a.checked_add(b).map_or(INF, |s| s.min(INF))
}

impl GradedSeries {
    /// `p + O(ρ^order)`; monomials of weight `≥ order` are dropped.
    pub fn new(poly: Poly, order: u32) -> Self {
        GradedSeries { poly: poly.truncate(order), order, horizon: order }
    }

    /// An exact polynomial, to be truncated at `horizon` once inexact
    /// operations are needed.
    pub fn exact(poly: Poly, horizon: u32) -> Self {
        GradedSeries { poly, order: INF, horizon }
    }

    /// An exact polynomial without a horizon (constants, literals).
    pub fn exact_unbounded(poly: Poly) -> Self {
        GradedSeries { poly, order: INF, horizon: INF }
    }

    pub fn constant(c: GaussRational) -> Self {
        GradedSeries::exact_unbounded(Poly::constant(c))
    }

    pub fn zero() -> Self {
        GradedSeries::exact_unbounded(Poly::zero())
    }

    pub fn one() -> Self {
        GradedSeries::constant(GaussRational::one())
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    /// Error order `k` in `O(ρᵏ)`, or `None` when exact.
    pub fn error_order(&self) -> Option<u32> {
        (self.order != INF).then_some(self.order)
    }

    pub fn is_exact(&self) -> bool {
        self.order == INF
    }

    pub fn horizon(&self) -> Option<u32> {
        (self.horizon != INF).then_some(self.horizon)
    }

    /// Truncation order that the value commits to: the error order, or the
    /// horizon for exact values.
    fn working_order(&self) -> u32 {
        self.order.min(self.horizon)
    }

    /// Forces truncation at `order` (a no-op when already coarser).
    pub fn truncate(&self, order: u32) -> GradedSeries {
        let o = self.order.min(order);
        GradedSeries { poly: self.poly.truncate(o), order: o, horizon: self.horizon.min(o) }
    }

    /// Weighted vanishing order of the known part; `None` when the known part
    /// is zero (the value is then `O(ρᵏ)` with `k` the error order).
    pub fn valuation(&self) -> Option<u32> {
        self.poly.min_weight()
    }

    /// Largest `k` for which the value is provably `O(ρᵏ)`.
    pub fn vanishing_order(&self) -> u32 {
        self.valuation().unwrap_or(self.order)
    }

    /// True when the value is zero up to its tracked error order.
    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn plus(&self, o: &GradedSeries) -> GradedSeries {
        let order = self.order.min(o.order);
        let mut poly = &self.poly + &o.poly;
        if order != INF {
            poly = poly.truncate(order);
        }
        GradedSeries { poly, order, horizon: self.horizon.min(o.horizon) }
    }

    pub fn negated(&self) -> GradedSeries {
        GradedSeries { poly: -&self.poly, order: self.order, horizon: self.horizon }
    }

    pub fn minus(&self, o: &GradedSeries) -> GradedSeries {
        self.plus(&o.negated())
    }

    pub fn times(&self, o: &GradedSeries) -> GradedSeries {
        let wa = self.poly.min_weight().unwrap_or(INF);
        let wb = o.poly.min_weight().unwrap_or(INF);
        let order = add_orders(self.order, wb)
            .min(add_orders(o.order, wa))
            .min(add_orders(self.order, o.order));
        let cut = (order != INF).then_some(order);
        GradedSeries {
            poly: self.poly.mul_truncated(&o.poly, cut),
            order,
            horizon: self.horizon.min(o.horizon),
        }
    }

    pub fn scaled(&self, c: &GaussRational) -> GradedSeries {
        GradedSeries { poly: self.poly.scale(c), order: self.order, horizon: self.horizon }
    }

    pub fn conj(&self) -> GradedSeries {
        GradedSeries { poly: self.poly.conj(), order: self.order, horizon: self.horizon }
    }

    pub fn is_real(&self) -> bool {
        self.poly.is_real()
    }

    pub fn diff(&self, v: Var) -> Result<GradedSeries, SymbolicError> {
        if self.order == INF {
            return Ok(GradedSeries { poly: self.poly.diff(v), order: INF, horizon: self.horizon });
        }
        let w = v.weight();
        if self.order <= w {
            return Err(SymbolicError::OrderExhausted { order: self.order, var: v });
        }
        let order = self.order - w;
        Ok(GradedSeries { poly: self.poly.diff(v).truncate(order), order, horizon: self.horizon.min(order) })
    }

    /// `Σ_{j≥0} coeffs[j] · h^j` truncated at `order`, for `h` without
    /// constant term.
    fn compose(h: &GradedSeries, coeffs: impl Fn(u32) -> GaussRational, order: u32) -> GradedSeries {
        let h = h.truncate(order);
        let mut acc = GradedSeries::new(Poly::constant(coeffs(0)), order);
        let mut power = GradedSeries::new(Poly::one(), order);
        // h has valuation ≥ 1, so h^j = O(ρ^j)
        for j in 1..order.max(1) {
            power = power.times(&h).truncate(order);
            if power.is_zero() && power.order >= order {
                break;
            }
            acc = acc.plus(&power.scaled(&coeffs(j)));
        }
        acc.truncate(order)
    }

    fn split_constant(&self) -> (GaussRational, GradedSeries) {
        let c = self.poly.constant_term();
        let h = self.minus(&GradedSeries::constant(c.clone()));
        (c, h)
    }

    fn target_order(&self, op: &str) -> Result<u32, SymbolicError> {
        let o = self.working_order();
        if o == INF {
            return Err(SymbolicError::Unsupported(format!("{op} of an exact series needs a truncation horizon")));
        }
        Ok(o)
    }

    pub fn invert(&self) -> Result<GradedSeries, SymbolicError> {
        self.invert_to(self.target_order("inversion")?)
    }

    fn invert_to(&self, order: u32) -> Result<GradedSeries, SymbolicError> {
        let (c, h) = self.split_constant();
        if c.is_zero() {
            return Err(SymbolicError::NonInvertibleSeries);
        }
        if h.is_zero() && h.is_exact() {
            return Ok(GradedSeries::constant(c.inv()?));
        }
        let cinv = c.inv()?;
        // 1/(c + h) = c⁻¹ Σ (−h/c)^j
        let q = h.scaled(&cinv);
        let neg_one = GaussRational::from_int(-1);
        let series = GradedSeries::compose(&q, |j| neg_one.pow(j), order);
        Ok(series.scaled(&cinv))
    }

    pub fn checked_div(&self, o: &GradedSeries) -> Result<GradedSeries, SymbolicError> {
        if o.is_exact() && o.poly.is_constant() {
            let c = o.poly.constant_term();
            if c.is_zero() {
                return Err(SymbolicError::DivisionByZero);
            }
            return Ok(self.scaled(&c.inv()?));
        }
        let target = self.working_order().min(o.working_order());
        if target == INF {
            return Err(SymbolicError::Unsupported("division of exact series without a horizon".into()));
        }
        Ok(self.times(&o.invert_to(target)?))
    }

    /// `exp(f)` for `f` with zero constant term.
    pub fn exp(&self) -> Result<GradedSeries, SymbolicError> {
        let (c, h) = self.split_constant();
        if !c.is_zero() {
            return Err(SymbolicError::NonRepresentable("exp of a series with nonzero constant term".into()));
        }
        if h.is_zero() && h.is_exact() {
            return Ok(GradedSeries::one());
        }
        let order = self.target_order("exp")?;
        Ok(GradedSeries::compose(&h, |j| factorial_inv(j), order))
    }

    /// `log(1 + f)` for `f` with zero constant term.
    pub fn log1p(&self) -> Result<GradedSeries, SymbolicError> {
        let (c, h) = self.split_constant();
        if !c.is_zero() {
            return Err(SymbolicError::NonRepresentable("log1p of a series with nonzero constant term".into()));
        }
        if h.is_zero() && h.is_exact() {
            return Ok(GradedSeries::zero());
        }
        let order = self.target_order("log1p")?;
        Ok(GradedSeries::compose(
            &h,
            |j| if j == 0 { GaussRational::zero() } else { GaussRational::ratio(if j % 2 == 1 { 1 } else { -1 }, j as i64) },
            order,
        ))
    }

    /// Square root of a series whose constant term is 1.
    pub fn sqrt(&self) -> Result<GradedSeries, SymbolicError> {
        let (c, h) = self.split_constant();
        if !c.is_one() {
            return Err(SymbolicError::NonRepresentable("sqrt needs constant term 1".into()));
        }
        if h.is_zero() && h.is_exact() {
            return Ok(GradedSeries::one());
        }
        let order = self.target_order("sqrt")?;
        Ok(GradedSeries::compose(&h, binomial_half, order))
    }

    /// Restriction to the chain `z = z̄ = 0`.
    pub fn restrict_chain(&self) -> GradedSeries {
        GradedSeries { poly: self.poly.restrict_chain(), order: self.order, horizon: self.horizon }
    }
}

fn factorial_inv(j: u32) -> GaussRational {
    let mut f: i64 = 1;
    for k in 2..=j as i64 {
        f *= k;
    }
    GaussRational::ratio(1, f)
}

/// Generalized binomial coefficient `C(1/2, j)`.
fn binomial_half(j: u32) -> GaussRational {
    let mut acc = GaussRational::one();
    for k in 0..j as i64 {
        // (1/2 − k) / (k + 1)
        acc = &acc * &GaussRational::ratio(1 - 2 * k, 2 * (k + 1));
    }
    acc
}

impl fmt::Display for GradedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.error_order() {
            Some(k) => write!(f, "{} + O({})", self.poly, k),
            None => write!(f, "{}", self.poly),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(v: Var) -> Poly {
        Poly::var(v)
    }

    #[test]
    fn order_propagation_through_products() {
        let a = GradedSeries::new(var(Var::Z), 3);
        let b = GradedSeries::new(var(Var::Zb), 3);
        let p = a.times(&b);
        assert_eq!(p.error_order(), Some(4));
        assert_eq!(p.poly(), &(&var(Var::Z) * &var(Var::Zb)));
    }

    #[test]
    fn inverse_of_near_identity_metric() {
        // g = 1 + z²z̄² + O(ρ⁶): g⁻¹ = 1 − z²z̄² + O(ρ⁶)
        let g = GradedSeries::new(&Poly::one() + &Poly::monomial(GaussRational::one(), [2, 2, 0]), 6);
        let inv = g.invert().unwrap();
        assert_eq!(inv.error_order(), Some(6));
        assert!(inv.times(&g).minus(&GradedSeries::one()).is_zero());
        assert!(inv.minus(&GradedSeries::one()).vanishing_order() >= 4);
        let zero = GradedSeries::new(var(Var::Z), 5);
        assert!(matches!(zero.invert(), Err(SymbolicError::NonInvertibleSeries)));
    }

    #[test]
    fn exp_log_sqrt() {
        assert_eq!(GradedSeries::zero().exp().unwrap(), GradedSeries::one());
        let h = GradedSeries::new(&var(Var::Z) + &var(Var::U), 6);
        let back = h.exp().unwrap().minus(&GradedSeries::one()).log1p().unwrap();
        assert!(back.minus(&h).is_zero());
        let one_plus = h.plus(&GradedSeries::one());
        let r = one_plus.sqrt().unwrap();
        assert!(r.times(&r).minus(&one_plus).is_zero());
    }

    #[test]
    fn derivative_drops_order_by_weight() {
        let u2 = GradedSeries::new(Poly::monomial(GaussRational::one(), [0, 0, 2]), 6);
        let d = u2.diff(Var::U).unwrap();
        assert_eq!(d.error_order(), Some(4));
        assert_eq!(d.poly(), &Poly::monomial(GaussRational::from_int(2), [0, 0, 1]));
        let small = GradedSeries::new(var(Var::Z), 2);
        assert!(small.diff(Var::U).is_err());
    }
}
