//! Sparse polynomials in `z`, `z̄`, `u` over ℚ(i).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::GaussRational;

/// One of the three real-analytic generators. `z` and `z̄` are treated as
/// independent variables; conjugation swaps them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    Z,
    Zb,
    U,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::Z, Var::Zb, Var::U];

    pub fn index(self) -> usize {
        match self {
            Var::Z => 0,
            Var::Zb => 1,
            Var::U => 2,
        }
    }

    /// Anisotropic weight: `z`, `z̄` count 1 and `u` counts 2.
    pub fn weight(self) -> u32 {
        match self {
            Var::U => 2,
            _ => 1,
        }
    }

    pub fn conj(self) -> Var {
        match self {
            Var::Z => Var::Zb,
            Var::Zb => Var::Z,
            Var::U => Var::U,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::Z => "z",
            Var::Zb => "zb",
            Var::U => "u",
        }
    }
}

/// Exponent triple `(deg_z, deg_z̄, deg_u)`.
pub type Mono = [u32; 3];

pub fn mono_weight(m: &Mono) -> u32 {
    m[0] + m[1] + 2 * m[2]
}

fn mono_conj(m: &Mono) -> Mono {
    [m[1], m[0], m[2]]
}

/// Canonical sparse polynomial: no zero coefficients, terms ordered
/// lexicographically by exponent triple.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    terms: BTreeMap<Mono, GaussRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(GaussRational::one())
    }

    pub fn constant(c: GaussRational) -> Self {
        Poly::monomial(c, [0, 0, 0])
    }

    pub fn from_int(n: i64) -> Self {
        Poly::constant(GaussRational::from_int(n))
    }

    pub fn monomial(c: GaussRational, m: Mono) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn var(v: Var) -> Self {
        let mut m = [0; 3];
        m[v.index()] = 1;
        Poly::monomial(GaussRational::one(), m)
    }

    /// `ζ = z z̄ − i u`, the CR function of the flat model.
    pub fn zeta() -> Self {
        Poly::monomial(GaussRational::one(), [1, 1, 0])
            + Poly::monomial(GaussRational::from_parts(0, 1, -1, 1), [0, 0, 1])
    }

    /// `(z z̄)² + u²`, the value of `s²`.
    pub fn s_squared() -> Self {
        Poly::monomial(GaussRational::one(), [2, 2, 0]) + Poly::monomial(GaussRational::one(), [0, 0, 2])
    }

    pub fn from_terms<I: IntoIterator<Item = (Mono, GaussRational)>>(it: I) -> Self {
        let mut p = Poly::zero();
        for (m, c) in it {
            p.add_term(m, &c);
        }
        p
    }

    pub fn add_term(&mut self, m: Mono, c: &GaussRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &GaussRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Mono) -> GaussRational {
        self.terms.get(m).cloned().unwrap_or_else(GaussRational::zero)
    }

    pub fn constant_term(&self) -> GaussRational {
        self.coeff(&[0, 0, 0])
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| *m == [0, 0, 0])
    }

    /// Largest term under lexicographic order.
    pub fn leading(&self) -> Option<(&Mono, &GaussRational)> {
        self.terms.iter().next_back()
    }

    /// Minimum weighted degree over stored monomials (`None` for zero).
    pub fn min_weight(&self) -> Option<u32> {
        self.terms.keys().map(mono_weight).min()
    }

    pub fn max_weight(&self) -> Option<u32> {
        self.terms.keys().map(mono_weight).max()
    }

    pub fn scale(&self, c: &GaussRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    pub fn shift(&self, by: &Mono) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| ([m[0] + by[0], m[1] + by[1], m[2] + by[2]], v.clone()))
                .collect(),
        }
    }

    pub fn conj(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, v)| (mono_conj(m), v.conj())).collect(),
        }
    }

    pub fn is_real(&self) -> bool {
        *self == self.conj()
    }

    pub fn diff(&self, v: Var) -> Poly {
        let k = v.index();
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if m[k] == 0 {
                continue;
            }
            let mut m2 = *m;
            m2[k] -= 1;
            out.add_term(m2, &c.scale_int(m[k] as i64));
        }
        out
    }

    /// Keeps monomials of weighted degree `< order`.
    pub fn truncate(&self, order: u32) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| mono_weight(m) < order)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Product keeping only monomials of weighted degree `< order`.
    pub fn mul_truncated(&self, rhs: &Poly, order: Option<u32>) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            let wa = mono_weight(ma);
            if order.is_some_and(|o| wa >= o) {
                continue;
            }
            for (mb, cb) in &rhs.terms {
                let m = [ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2]];
                if order.is_some_and(|o| mono_weight(&m) >= o) {
                    continue;
                }
                out.add_term(m, &(ca * cb));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Restriction to the chain `z = z̄ = 0`.
    pub fn restrict_chain(&self) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m[0] == 0 && m[1] == 0)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (dm, dc) = d.leading()?;
        let dc_inv = dc.inv().ok()?;
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((rm, rc)) = rem.leading() {
            if rm[0] < dm[0] || rm[1] < dm[1] || rm[2] < dm[2] {
                return None;
            }
            let qm = [rm[0] - dm[0], rm[1] - dm[1], rm[2] - dm[2]];
            let qc = rc * &dc_inv;
            let step = d.shift(&qm).scale(&qc);
            rem = &rem - &step;
            quot.add_term(qm, &qc);
        }
        Some(quot)
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Mono {
        let mut out: Option<Mono> = None;
        for m in self.terms.keys() {
            out = Some(match out {
                None => *m,
                Some(o) => [o[0].min(m[0]), o[1].min(m[1]), o[2].min(m[2])],
            });
        }
        out.unwrap_or([0, 0, 0])
    }

    /// Divides by a monomial that is known to divide every term.
    pub fn unshift(&self, by: &Mono) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| ([m[0] - by[0], m[1] - by[1], m[2] - by[2]], v.clone()))
                .collect(),
        }
    }

    pub fn eval(&self, z: Complex64, zb: Complex64, u: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            acc += c.to_complex() * z.powu(m[0]) * zb.powu(m[1]) * u.powu(m[2]);
        }
        acc
    }

    pub fn eval_exact(&self, z: &GaussRational, zb: &GaussRational, u: &GaussRational) -> GaussRational {
        let mut acc = GaussRational::zero();
        for (m, c) in &self.terms {
            acc += &(&(&(c * &z.pow(m[0])) * &zb.pow(m[1])) * &u.pow(m[2]));
        }
        acc
    }

    /// Substitutes `(z, z̄, u) ↦ (t z, t z̄, t² u)` for rational `t`.
    pub fn dilate(&self, t: &GaussRational) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, c * &t.pow(mono_weight(m))))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono: Vec<String> = Var::ALL
                .iter()
                .zip(m.iter())
                .filter(|(_, e)| **e > 0)
                .map(|(v, e)| if *e == 1 { v.name().to_string() } else { format!("{}^{}", v.name(), e) })
                .collect();
            if mono.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", c, mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c);
        }
        out
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, &-c);
        }
        out
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.mul_truncated(rhs, None)
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&GaussRational::from_int(-1))
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&GaussRational::from_int(-1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> Poly {
        Poly::var(Var::Z)
    }
    fn zb() -> Poly {
        Poly::var(Var::Zb)
    }

    #[test]
    fn canonical_sums_and_products() {
        let zz = &z() * &zb();
        assert_eq!(&zz + &zz, zz.scale(&GaussRational::from_int(2)));
        // (z + i z̄)(z − i z̄) = z² + z̄²
        let i = GaussRational::i();
        let a = &z() + &zb().scale(&i);
        let b = &z() - &zb().scale(&i);
        assert_eq!(&a * &b, &z().pow(2) + &zb().pow(2));
        assert!((&zz - &zz).is_zero());
    }

    #[test]
    fn conjugation_pairs_c42_with_c24() {
        let c42 = GaussRational::from_parts(2, 3, 1, 5);
        let t = Poly::monomial(c42.clone(), [4, 2, 0]);
        assert_eq!(t.conj(), Poly::monomial(c42.conj(), [2, 4, 0]));
    }

    #[test]
    fn exact_division() {
        let zeta = Poly::zeta();
        let p = &(&zeta * &zeta.conj()) * &(&z() + &Poly::one());
        assert_eq!(p.div_exact(&zeta.conj()).unwrap(), &zeta * &(&z() + &Poly::one()));
        assert!(p.div_exact(&(&z() - &Poly::one())).is_none());
        assert_eq!(&zeta * &zeta.conj(), Poly::s_squared());
    }

    #[test]
    fn derivative_of_monomial() {
        // ∂z ∂z̄ ∂z ∂z̄ (z³ z̄³) = 36 z z̄
        let p = Poly::monomial(GaussRational::one(), [3, 3, 0]);
        let d = p.diff(Var::Z).diff(Var::Zb).diff(Var::Z).diff(Var::Zb);
        assert_eq!(d, Poly::monomial(GaussRational::from_int(36), [1, 1, 0]));
    }
}
