//! Rational functions in `z`, `z̄`, `u` and `s`, where `s` is the positive
//! root of `s² = (z z̄)² + u²` (so `s = ρ²`).
//!
//! Numerators are kept with `s`-degree at most one. Denominators are kept
//! `s`-free and factored: a product of monic polynomials with multiplicities.
//! Factors are not guaranteed irreducible, so the representation is not fully
//! canonical; zero-testing only inspects the numerator and is exact.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use super::{GaussRational, Poly, SymbolicError, Var};

/// `a + b·s` with `a`, `b` polynomials in `z, z̄, u`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SPoly {
    pub a: Poly,
    pub b: Poly,
}

impl SPoly {
    pub fn new(a: Poly, b: Poly) -> Self {
        SPoly { a, b }
    }

    pub fn from_poly(a: Poly) -> Self {
        SPoly { a, b: Poly::zero() }
    }

    pub fn s() -> Self {
        SPoly { a: Poly::zero(), b: Poly::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn has_s(&self) -> bool {
        !self.b.is_zero()
    }

    pub fn add(&self, o: &SPoly) -> SPoly {
        SPoly { a: &self.a + &o.a, b: &self.b + &o.b }
    }

    pub fn sub(&self, o: &SPoly) -> SPoly {
        SPoly { a: &self.a - &o.a, b: &self.b - &o.b }
    }

    pub fn mul(&self, o: &SPoly) -> SPoly {
        let mut a = &self.a * &o.a;
        if self.has_s() && o.has_s() {
            a = &a + &(&(&self.b * &o.b) * &Poly::s_squared());
        }
        let b = &(&self.a * &o.b) + &(&self.b * &o.a);
        SPoly { a, b }
    }

    pub fn mul_poly(&self, p: &Poly) -> SPoly {
        SPoly { a: &self.a * p, b: &self.b * p }
    }

    pub fn scale(&self, c: &GaussRational) -> SPoly {
        SPoly { a: self.a.scale(c), b: self.b.scale(c) }
    }

    pub fn conj(&self) -> SPoly {
        SPoly { a: self.a.conj(), b: self.b.conj() }
    }

    /// `a − b·s`; multiplying by it makes the product `s`-free.
    pub fn s_conjugate(&self) -> SPoly {
        SPoly { a: self.a.clone(), b: -&self.b }
    }

    pub fn div_exact(&self, d: &Poly) -> Option<SPoly> {
        Some(SPoly { a: self.a.div_exact(d)?, b: self.b.div_exact(d)? })
    }

    pub fn eval(&self, z: Complex64, zb: Complex64, u: Complex64, s: Complex64) -> Complex64 {
        self.a.eval(z, zb, u) + self.b.eval(z, zb, u) * s
    }
}

impl fmt::Display for SPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "({})*s", self.b),
            (false, false) => write!(f, "{} + ({})*s", self.a, self.b),
        }
    }
}

/// Normalizes a nonconstant polynomial so its leading coefficient is 1.
/// Returns the stripped leading coefficient and the monic polynomial.
pub(crate) fn make_monic(p: &Poly) -> (GaussRational, Poly) {
    let lc = p.leading().map(|(_, c)| c.clone()).unwrap_or_else(GaussRational::one);
    let inv = lc.inv().expect("leading coefficient is nonzero");
    (lc, p.scale(&inv))
}

/// Product of monic polynomial factors with multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Factored {
    factors: BTreeMap<Poly, u32>,
}

impl Factored {
    pub fn one() -> Self {
        Factored::default()
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> impl Iterator<Item = (&Poly, &u32)> {
        self.factors.iter()
    }

    fn insert(&mut self, f: Poly, k: u32) {
        if k > 0 {
            *self.factors.entry(f).or_insert(0) += k;
        }
    }

    pub fn expand(&self) -> Poly {
        let mut acc = Poly::one();
        for (f, k) in &self.factors {
            acc = &acc * &f.pow(*k);
        }
        acc
    }

    fn lcm(&self, o: &Factored) -> Factored {
        let mut out = self.clone();
        for (f, k) in &o.factors {
            let e = out.factors.entry(f.clone()).or_insert(0);
            *e = (*e).max(*k);
        }
        out
    }

    /// `self / sub` as an expanded polynomial; `sub` must divide `self`.
    fn cofactor(&self, sub: &Factored) -> Poly {
        let mut acc = Poly::one();
        for (f, k) in &self.factors {
            let j = sub.factors.get(f).copied().unwrap_or(0);
            if *k > j {
                acc = &acc * &f.pow(k - j);
            }
        }
        acc
    }

    fn conj(&self) -> (GaussRational, Factored) {
        let mut c = GaussRational::one();
        let mut out = Factored::one();
        for (f, k) in &self.factors {
            let (lc, m) = make_monic(&f.conj());
            c = &c * &lc.pow(*k);
            out.insert(m, *k);
        }
        (c, out)
    }

    pub fn eval(&self, z: Complex64, zb: Complex64, u: Complex64) -> Complex64 {
        self.factors
            .iter()
            .fold(Complex64::new(1.0, 0.0), |acc, (f, k)| acc * f.eval(z, zb, u).powu(*k))
    }
}

/// Polynomials tried first when splitting a new denominator.
fn known_primes() -> Vec<Poly> {
    vec![Poly::zeta(), Poly::zeta().conj()]
}

/// Splits `p` into a constant and monic factors, trial-dividing by the
/// coordinate variables, `ζ`, `ζ̄` and any `hints`.
fn factorize<'a>(p: &Poly, hints: impl Iterator<Item = &'a Poly>) -> (GaussRational, Factored) {
    let mut out = Factored::one();
    let content = p.monomial_content();
    let mut rest = p.unshift(&content);
    for v in Var::ALL {
        out.insert(Poly::var(v), content[v.index()]);
    }
    let mut candidates = known_primes();
    for h in hints {
        if !candidates.contains(h) {
            candidates.push(h.clone());
        }
    }
    for f in &candidates {
        if f.is_constant() || rest.is_constant() {
            continue;
        }
        let mut k = 0;
        while let Some(q) = rest.div_exact(f) {
            rest = q;
            k += 1;
            if rest.is_constant() {
                break;
            }
        }
        out.insert(f.clone(), k);
    }
    if rest.is_constant() {
        (rest.constant_term(), out)
    } else {
        let (lc, m) = make_monic(&rest);
        out.insert(m, 1);
        (lc, out)
    }
}

/// A rational function `num / den` over ℚ(i)[z, z̄, u, s]/(s² − (zz̄)² − u²).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatFn {
    num: SPoly,
    den: Factored,
}

impl Default for RatFn {
    fn default() -> Self {
        RatFn::zero()
    }
}

impl RatFn {
    pub fn zero() -> Self {
        RatFn { num: SPoly::default(), den: Factored::one() }
    }

    pub fn one() -> Self {
        RatFn::constant(GaussRational::one())
    }

    pub fn constant(c: GaussRational) -> Self {
        RatFn::from_poly(Poly::constant(c))
    }

    pub fn from_int(n: i64) -> Self {
        RatFn::constant(GaussRational::from_int(n))
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFn { num: SPoly::from_poly(p), den: Factored::one() }
    }

    pub fn var(v: Var) -> Self {
        RatFn::from_poly(Poly::var(v))
    }

    /// `s = ρ² = ((zz̄)² + u²)^{1/2}`.
    pub fn s() -> Self {
        RatFn { num: SPoly::s(), den: Factored::one() }
    }

    pub fn zeta() -> Self {
        RatFn::from_poly(Poly::zeta())
    }

    pub fn numerator(&self) -> &SPoly {
        &self.num
    }

    pub fn denominator(&self) -> &Factored {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        !self.num.has_s() && self.num.a.is_constant() && self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<GaussRational> {
        self.is_constant().then(|| self.num.a.constant_term())
    }

    pub fn has_s(&self) -> bool {
        self.num.has_s()
    }

    /// Polynomial value when the denominator is trivial and `s` is absent.
    pub fn as_poly(&self) -> Option<&Poly> {
        (self.den.is_one() && !self.num.has_s()).then_some(&self.num.a)
    }

    /// Builds `num / den` from an `s`-free polynomial denominator.
    pub fn from_parts(num: SPoly, den: &Poly) -> Result<RatFn, SymbolicError> {
        if den.is_zero() {
            return Err(SymbolicError::DivisionByZero);
        }
        let (c, f) = factorize(den, std::iter::empty());
        let cinv = c.inv()?;
        Ok(RatFn { num: num.scale(&cinv), den: f }.reduce())
    }

    /// Cancels common factors between numerator and denominator.
    fn reduce(mut self) -> RatFn {
        if self.num.is_zero() {
            self.den = Factored::one();
            return self;
        }
        let keys: Vec<Poly> = self.den.factors.keys().cloned().collect();
        for f in keys {
            let mut k = self.den.factors[&f];
            while k > 0 {
                match self.num.div_exact(&f) {
                    Some(q) => {
                        self.num = q;
                        k -= 1;
                    }
                    None => break,
                }
            }
            if k == 0 {
                self.den.factors.remove(&f);
            } else {
                self.den.factors.insert(f, k);
            }
        }
        self
    }

    pub fn add(&self, o: &RatFn) -> RatFn {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return RatFn { num: self.num.add(&o.num), den: self.den.clone() }.reduce();
        }
        let den = self.den.lcm(&o.den);
        let a = self.num.mul_poly(&den.cofactor(&self.den));
        let b = o.num.mul_poly(&den.cofactor(&o.den));
        RatFn { num: a.add(&b), den }.reduce()
    }

    pub fn neg(&self) -> RatFn {
        RatFn { num: self.num.scale(&GaussRational::from_int(-1)), den: self.den.clone() }
    }

    pub fn sub(&self, o: &RatFn) -> RatFn {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFn) -> RatFn {
        if self.is_zero() || o.is_zero() {
            return RatFn::zero();
        }
        let mut den = self.den.clone();
        for (f, k) in &o.den.factors {
            den.insert(f.clone(), *k);
        }
        RatFn { num: self.num.mul(&o.num), den }.reduce()
    }

    pub fn scale(&self, c: &GaussRational) -> RatFn {
        if c.is_zero() {
            return RatFn::zero();
        }
        RatFn { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn pow(&self, e: u32) -> RatFn {
        let mut acc = RatFn::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn inv(&self) -> Result<RatFn, SymbolicError> {
        if self.is_zero() {
            return Err(SymbolicError::DivisionByZero);
        }
        if !self.num.has_s() {
            let (c, fac) = factorize(&self.num.a, self.den.factors.keys());
            let num = SPoly { a: self.den.expand(), b: Poly::zero() }.scale(&c.inv()?);
            return Ok(RatFn { num, den: fac }.reduce());
        }
        // 1/(a + b s) = (a − b s) / (a² − b² s²)
        let sc = self.num.s_conjugate();
        let norm = self.num.mul(&sc);
        debug_assert!(!norm.has_s());
        let (c, fac) = factorize(&norm.a, self.den.factors.keys());
        let num = sc.mul_poly(&self.den.expand()).scale(&c.inv()?);
        Ok(RatFn { num, den: fac }.reduce())
    }

    pub fn checked_div(&self, o: &RatFn) -> Result<RatFn, SymbolicError> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn conj(&self) -> RatFn {
        let (c, den) = self.den.conj();
        let num = self.num.conj().scale(&c.inv().expect("nonzero"));
        RatFn { num, den }
    }

    pub fn is_real(&self) -> bool {
        self.sub(&self.conj()).is_zero()
    }

    pub fn diff(&self, v: Var) -> RatFn {
        // d(a + b s) = a' + b' s + b·(∂s²/2)·s/s²
        let mut dnum = RatFn::from_parts_unreduced(
            SPoly { a: self.num.a.diff(v), b: self.num.b.diff(v) },
            Factored::one(),
        );
        if self.num.has_s() {
            let half = GaussRational::ratio(1, 2);
            let ds2 = Poly::s_squared().diff(v).scale(&half);
            let mut s2 = Factored::one();
            s2.insert(Poly::zeta(), 1);
            s2.insert(make_monic(&Poly::zeta().conj()).1, 1);
            let extra = RatFn { num: SPoly { a: Poly::zero(), b: &self.num.b * &ds2 }, den: s2 }.reduce();
            dnum = dnum.add(&extra);
        }
        let mut out = dnum.mul(&RatFn { num: SPoly::from_poly(Poly::one()), den: self.den.clone() });
        if !self.den.is_one() {
            // −(num/den)·Σ k f'/f
            let mut log_deriv = RatFn::zero();
            for (f, k) in &self.den.factors {
                let mut d = Factored::one();
                d.insert(f.clone(), 1);
                let term = RatFn { num: SPoly::from_poly(f.diff(v).scale(&GaussRational::from_int(*k as i64))), den: d }.reduce();
                log_deriv = log_deriv.add(&term);
            }
            out = out.sub(&self.mul(&log_deriv));
        }
        out
    }

    fn from_parts_unreduced(num: SPoly, den: Factored) -> RatFn {
        RatFn { num, den }
    }

    pub fn eval(&self, z: Complex64, zb: Complex64, u: Complex64, s: Complex64) -> Complex64 {
        self.num.eval(z, zb, u, s) / self.den.eval(z, zb, u)
    }

    /// Exact value at a point; `s` must satisfy `s² = (z z̄)² + u²` when the
    /// expression involves `s`.
    pub fn eval_exact(
        &self,
        z: &GaussRational,
        zb: &GaussRational,
        u: &GaussRational,
        s: Option<&GaussRational>,
    ) -> Result<GaussRational, SymbolicError> {
        let mut num = self.num.a.eval_exact(z, zb, u);
        if self.num.has_s() {
            let s = s.ok_or_else(|| SymbolicError::Unsupported("exact evaluation needs a rational s".into()))?;
            num += &(&self.num.b.eval_exact(z, zb, u) * s);
        }
        let den = self.den.expand().eval_exact(z, zb, u);
        num.checked_div(&den)
    }

    /// Weighted-homogeneous dilation `(z, z̄, u, s) ↦ (t z, t z̄, t² u, t² s)`.
    pub fn dilate(&self, t: &GaussRational) -> RatFn {
        let t2 = t.pow(2);
        let num = SPoly { a: self.num.a.dilate(t), b: self.num.b.dilate(t).scale(&t2) };
        let den = self.den.expand().dilate(t);
        RatFn::from_parts(num, &den).expect("dilation keeps the denominator nonzero")
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let den: Vec<String> = self
            .den
            .factors
            .iter()
            .map(|(p, k)| if *k == 1 { format!("({p})") } else { format!("({p})^{k}") })
            .collect();
        write!(f, "({})/({})", self.num, den.join("*"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> RatFn {
        RatFn::var(Var::Z)
    }
    fn zb() -> RatFn {
        RatFn::var(Var::Zb)
    }
    fn u() -> RatFn {
        RatFn::var(Var::U)
    }

    #[test]
    fn s_relation_and_derivatives() {
        let s = RatFn::s();
        let zeta = RatFn::zeta();
        // ζ ζ̄ − s² = 0
        assert!(zeta.mul(&zeta.conj()).sub(&s.mul(&s)).is_zero());
        // ∂u s = u / s
        assert!(s.diff(Var::U).sub(&u().checked_div(&s).unwrap()).is_zero());
        // ∂z s = z z̄² / s
        let expect = z().mul(&zb()).mul(&zb()).checked_div(&s).unwrap();
        assert!(s.diff(Var::Z).sub(&expect).is_zero());
    }

    #[test]
    fn inverse_and_cancellation() {
        let a = RatFn::from_poly(&Poly::one() + &Poly::var(Var::Z)).add(&RatFn::s());
        let q = a.inv().unwrap();
        assert!(q.mul(&a).sub(&RatFn::one()).is_zero());
        let r = RatFn::zeta().mul(&RatFn::zeta().inv().unwrap());
        assert_eq!(r, RatFn::one());
    }

    #[test]
    fn mixed_partials_commute() {
        let e = RatFn::s().add(&z()).inv().unwrap().mul(&u());
        let a = e.diff(Var::Z).diff(Var::U);
        let b = e.diff(Var::U).diff(Var::Z);
        assert!(a.sub(&b).is_zero());
    }
}
