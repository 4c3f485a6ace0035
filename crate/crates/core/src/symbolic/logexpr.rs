//! Closed-form expressions: rational functions in `(z, z̄, u, s)` extended
//! polynomially by logarithm atoms.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::ToPrimitive;

use super::rat::make_monic;
use super::{GaussRational, Poly, RatFn, SymbolicError, Var};

/// A logarithm treated as an independent transcendental generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LogAtom {
    /// `log p` for a monic nonconstant polynomial `p`.
    Log(Poly),
    /// A real constant such as `log(2π)`; its value is kept as `f64` bits for
    /// numerical evaluation only.
    Const { label: String, bits: u64 },
}

impl LogAtom {
    pub fn constant(label: impl Into<String>, value: f64) -> LogAtom {
        LogAtom::Const { label: label.into(), bits: value.to_bits() }
    }

    /// `log(2π)`.
    pub fn log_two_pi() -> LogAtom {
        LogAtom::constant("log(2pi)", (2.0 * std::f64::consts::PI).ln())
    }

    fn derivative(&self, v: Var) -> RatFn {
        match self {
            LogAtom::Log(p) => RatFn::from_poly(p.diff(v))
                .checked_div(&RatFn::from_poly(p.clone()))
                .expect("log atom argument is nonzero"),
            LogAtom::Const { .. } => RatFn::zero(),
        }
    }

    fn eval(&self, z: Complex64, zb: Complex64, u: Complex64) -> Complex64 {
        match self {
            LogAtom::Log(p) => p.eval(z, zb, u).ln(),
            LogAtom::Const { bits, .. } => Complex64::new(f64::from_bits(*bits), 0.0),
        }
    }
}

impl fmt::Display for LogAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogAtom::Log(p) => write!(f, "log({p})"),
            LogAtom::Const { label, .. } => write!(f, "{label}"),
        }
    }
}

/// Product of atom powers; empty for the rational part.
pub type LogMono = BTreeMap<LogAtom, u32>;

/// `Σ coeff · Π atom^k`, with rational-function coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LogExpr {
    terms: BTreeMap<LogMono, RatFn>,
}

impl LogExpr {
    pub fn zero() -> Self {
        LogExpr::default()
    }

    pub fn one() -> Self {
        LogExpr::from_rat(RatFn::one())
    }

    pub fn constant(c: GaussRational) -> Self {
        LogExpr::from_rat(RatFn::constant(c))
    }

    pub fn from_int(n: i64) -> Self {
        LogExpr::constant(GaussRational::from_int(n))
    }

    pub fn from_rat(r: RatFn) -> Self {
        let mut e = LogExpr::zero();
        e.add_term(LogMono::new(), r);
        e
    }

    pub fn from_poly(p: Poly) -> Self {
        LogExpr::from_rat(RatFn::from_poly(p))
    }

    pub fn var(v: Var) -> Self {
        LogExpr::from_poly(Poly::var(v))
    }

    pub fn s() -> Self {
        LogExpr::from_rat(RatFn::s())
    }

    pub fn zeta() -> Self {
        LogExpr::from_poly(Poly::zeta())
    }

    pub fn atom(a: LogAtom) -> Self {
        let mut m = LogMono::new();
        m.insert(a, 1);
        let mut e = LogExpr::zero();
        e.add_term(m, RatFn::one());
        e
    }

    /// `log p` for a polynomial `p` whose leading coefficient is a positive
    /// rational. The constant is split off as its own atom.
    pub fn log_poly(p: &Poly) -> Result<LogExpr, SymbolicError> {
        if p.is_zero() {
            return Err(SymbolicError::NonRepresentable("log 0".into()));
        }
        if p.is_constant() {
            return LogExpr::log_rational_constant(&p.constant_term());
        }
        let (lc, monic) = make_monic(p);
        let mut out = LogExpr::atom(LogAtom::Log(monic));
        if !lc.is_one() {
            out = out.plus(&LogExpr::log_rational_constant(&lc)?);
        }
        Ok(out)
    }

    fn log_rational_constant(c: &GaussRational) -> Result<LogExpr, SymbolicError> {
        if !c.is_real() || c.re <= num_rational::BigRational::from_integer(0.into()) {
            return Err(SymbolicError::NonRepresentable(format!("log of non-positive constant {c}")));
        }
        if c.is_one() {
            return Ok(LogExpr::zero());
        }
        let value = c.re.to_f64().unwrap_or(f64::NAN).ln();
        Ok(LogExpr::atom(LogAtom::constant(format!("log({c})"), value)))
    }

    /// `log` of an `s`-free rational function with positive-rational leading
    /// coefficients.
    pub fn log_rat(r: &RatFn) -> Result<LogExpr, SymbolicError> {
        if r.has_s() {
            return Err(SymbolicError::NonRepresentable(format!("log of {r}")));
        }
        let mut out = LogExpr::log_poly(&r.numerator().a)?;
        for (f, k) in r.denominator().factors() {
            out = out.minus(&LogExpr::log_poly(f)?.scaled(&GaussRational::from_int(*k as i64)));
        }
        Ok(out)
    }

    /// `log ζ`.
    pub fn log_zeta() -> Self {
        LogExpr::atom(LogAtom::Log(Poly::zeta()))
    }

    /// `log ζ̄`.
    pub fn log_zeta_bar() -> Self {
        LogExpr::atom(LogAtom::Log(Poly::zeta().conj()))
    }

    /// `log s = log ρ² = ½(log ζ + log ζ̄)`.
    pub fn log_s() -> Self {
        LogExpr::log_zeta().plus(&LogExpr::log_zeta_bar()).scaled(&GaussRational::ratio(1, 2))
    }

    /// `log ρ`.
    pub fn log_rho() -> Self {
        LogExpr::log_s().scaled(&GaussRational::ratio(1, 2))
    }

    fn add_term(&mut self, m: LogMono, r: RatFn) {
        if r.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            Some(old) => {
                let sum = old.add(&r);
                if !sum.is_zero() {
                    self.terms.insert(m, sum);
                }
            }
            None => {
                self.terms.insert(m, r);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LogMono, &RatFn)> {
        self.terms.iter()
    }

    /// Exact zero test: every log-monomial coefficient must vanish.
    pub fn is_zero(&self) -> bool {
        self.terms.values().all(RatFn::is_zero)
    }

    /// The atom-free coefficient, when there are no log atoms.
    pub fn as_rat(&self) -> Option<RatFn> {
        match self.terms.len() {
            0 => Some(RatFn::zero()),
            1 => self.terms.get(&LogMono::new()).cloned(),
            _ => None,
        }
    }

    pub fn has_logs(&self) -> bool {
        self.terms.keys().any(|m| !m.is_empty())
    }

    pub fn plus(&self, o: &LogExpr) -> LogExpr {
        let mut out = self.clone();
        for (m, r) in &o.terms {
            out.add_term(m.clone(), r.clone());
        }
        out
    }

    pub fn negated(&self) -> LogExpr {
        LogExpr { terms: self.terms.iter().map(|(m, r)| (m.clone(), r.neg())).collect() }
    }

    pub fn minus(&self, o: &LogExpr) -> LogExpr {
        self.plus(&o.negated())
    }

    pub fn times(&self, o: &LogExpr) -> LogExpr {
        let mut out = LogExpr::zero();
        for (ma, ra) in &self.terms {
            for (mb, rb) in &o.terms {
                let mut m = ma.clone();
                for (a, k) in mb {
                    *m.entry(a.clone()).or_insert(0) += k;
                }
                out.add_term(m, ra.mul(rb));
            }
        }
        out
    }

    pub fn scaled(&self, c: &GaussRational) -> LogExpr {
        let mut out = LogExpr::zero();
        for (m, r) in &self.terms {
            out.add_term(m.clone(), r.scale(c));
        }
        out
    }

    pub fn times_rat(&self, r: &RatFn) -> LogExpr {
        let mut out = LogExpr::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.mul(r));
        }
        out
    }

    pub fn pow(&self, e: u32) -> LogExpr {
        let mut acc = LogExpr::one();
        for _ in 0..e {
            acc = acc.times(self);
        }
        acc
    }

    /// Division by an expression without log atoms.
    pub fn checked_div(&self, o: &LogExpr) -> Result<LogExpr, SymbolicError> {
        let r = o
            .as_rat()
            .ok_or_else(|| SymbolicError::Unsupported(format!("division by logarithmic expression {o}")))?;
        Ok(self.times_rat(&r.inv()?))
    }

    pub fn conj(&self) -> LogExpr {
        let mut out = LogExpr::zero();
        for (m, r) in &self.terms {
            let mut term = LogExpr::from_rat(r.conj());
            for (a, k) in m {
                let ca = match a {
                    LogAtom::Log(p) => LogExpr::log_poly(&p.conj()).unwrap_or_else(|_| {
                        // non-positive leading coefficient after conjugation:
                        // keep the conjugated polynomial as a formal atom
                        LogExpr::atom(LogAtom::Log(make_monic(&p.conj()).1))
                    }),
                    LogAtom::Const { .. } => LogExpr::atom(a.clone()),
                };
                term = term.times(&ca.pow(*k));
            }
            out = out.plus(&term);
        }
        out
    }

    pub fn is_real(&self) -> bool {
        self.minus(&self.conj()).is_zero()
    }

    pub fn re(&self) -> LogExpr {
        self.plus(&self.conj()).scaled(&GaussRational::ratio(1, 2))
    }

    pub fn im(&self) -> LogExpr {
        self.minus(&self.conj()).scaled(&GaussRational::from_parts(0, 1, -1, 2))
    }

    pub fn diff(&self, v: Var) -> LogExpr {
        let mut out = LogExpr::zero();
        for (m, r) in &self.terms {
            out.add_term(m.clone(), r.diff(v));
            for (a, k) in m {
                let da = a.derivative(v);
                if da.is_zero() {
                    continue;
                }
                let mut m2 = m.clone();
                if *k == 1 {
                    m2.remove(a);
                } else {
                    m2.insert(a.clone(), k - 1);
                }
                out.add_term(m2, r.mul(&da).scale(&GaussRational::from_int(*k as i64)));
            }
        }
        out
    }

    /// Atoms appearing anywhere in the expression.
    pub fn atoms(&self) -> Vec<LogAtom> {
        let mut v: Vec<LogAtom> = self.terms.keys().flat_map(|m| m.keys().cloned()).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Numerical value at real coordinates `z = x + i y`, `u`.
    pub fn eval(&self, x: f64, y: f64, u: f64) -> Complex64 {
        let z = Complex64::new(x, y);
        let zb = z.conj();
        let uu = Complex64::new(u, 0.0);
        let s = Complex64::new(((x * x + y * y).powi(2) + u * u).sqrt(), 0.0);
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, r) in &self.terms {
            let mut t = r.eval(z, zb, uu, s);
            for (a, k) in m {
                t *= a.eval(z, zb, uu).powu(*k);
            }
            acc += t;
        }
        acc
    }

    /// Dilation `(z, u) ↦ (t z, t² u)` applied to an atom-free expression.
    pub fn dilate(&self, t: &GaussRational) -> Result<LogExpr, SymbolicError> {
        let r = self
            .as_rat()
            .ok_or_else(|| SymbolicError::Unsupported("dilation of logarithmic expression".into()))?;
        Ok(LogExpr::from_rat(r.dilate(t)))
    }
}

impl fmt::Display for LogExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, r)| {
                let mut s = format!("[{r}]");
                for (a, k) in m {
                    if *k == 1 {
                        s.push_str(&format!("*{a}"));
                    } else {
                        s.push_str(&format!("*{a}^{k}"));
                    }
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_derivative_rule() {
        // ∂z log ζ = z̄/ζ
        let d = LogExpr::log_zeta().diff(Var::Z);
        let expect = LogExpr::var(Var::Zb).checked_div(&LogExpr::zeta()).unwrap();
        assert!(d.minus(&expect).is_zero());
        // log s derivative: ∂u log s = u / s²
        let d = LogExpr::log_s().diff(Var::U);
        let expect = LogExpr::var(Var::U).checked_div(&LogExpr::s().times(&LogExpr::s())).unwrap();
        assert!(d.minus(&expect).is_zero());
    }

    #[test]
    fn constants_have_zero_derivative() {
        let e = LogExpr::atom(LogAtom::log_two_pi()).times(&LogExpr::var(Var::Z));
        assert!(e.diff(Var::Z).minus(&LogExpr::atom(LogAtom::log_two_pi())).is_zero());
    }

    #[test]
    fn log_of_rational_splits_constants() {
        let f = RatFn::from_int(4)
            .checked_div(&RatFn::from_poly(&Poly::one() + &Poly::monomial(GaussRational::one(), [1, 1, 0])))
            .unwrap();
        let l = LogExpr::log_rat(&f).unwrap();
        assert_eq!(l.atoms().len(), 2, "{l} {:?}", l.atoms());
        let v = l.eval(0.5, 0.25, 0.3).re;
        let exact = (4.0f64 / (1.0 + 0.25 + 0.0625)).ln();
        assert!((v - exact).abs() < 1e-12);
        assert!(LogExpr::log_poly(&Poly::from_int(-2)).is_err());
    }

    #[test]
    fn conjugation_swaps_zeta_logs() {
        assert_eq!(LogExpr::log_zeta().conj(), LogExpr::log_zeta_bar());
        assert!(LogExpr::log_s().is_real());
    }
}
