//! Exterior algebra over the coordinate coframe `{dz, dz̄, du}`.
//!
//! `dz` and `dz̄` are independent basis covectors; conjugation maps one to the
//! other. Components are stored on sorted multi-indices encoded as bitmasks
//! (bit 0 = `dz`, bit 1 = `dz̄`, bit 2 = `du`).

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::symbolic::{GaussRational, Scalar, SymbolicError, Var};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum FormError {
    #[error("degree {0} exceeds 3")]
    DegreeOverflow(u8),
    #[error("expected a {expected}-form, got degree {got}")]
    WrongDegree { expected: u8, got: u8 },
    #[error("coframe is singular")]
    SingularCoframe,
    #[error("contact condition fails: θ ∧ dθ vanishes")]
    NotContact,
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
}

fn bit(v: Var) -> u8 {
    1 << v.index()
}

fn var_of(i: usize) -> Var {
    Var::ALL[i]
}


/// Sign of `dx_a ∧ dx_b` relative to the sorted multi-index `a | b`.
fn wedge_sign(a: u8, b: u8) -> i64 {
    let mut inversions = 0;
    for i in 0..3 {
        if a & (1 << i) != 0 {
            // count indices of b strictly below i
            inversions += (b & ((1 << i) - 1)).count_ones();
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Conjugation of a basis multi-index: swaps `dz` and `dz̄` and returns the
/// sign needed to restore sorted order.
fn conj_mask(mask: u8) -> (u8, i64) {
    let has_z = mask & 1 != 0;
    let has_zb = mask & 2 != 0;
    let swapped = (mask & 4) | if has_z { 2 } else { 0 } | if has_zb { 1 } else { 0 };
    let sign = if has_z && has_zb { -1 } else { 1 };
    (swapped, sign)
}

/// An exterior form of fixed degree.
#[derive(Clone, Debug, PartialEq)]
pub struct DifferentialForm<S: Scalar> {
    degree: u8,
    comps: BTreeMap<u8, S>,
}

impl<S: Scalar> DifferentialForm<S> {
    pub fn zero(degree: u8) -> Self {
        DifferentialForm { degree, comps: BTreeMap::new() }
    }

    pub fn scalar(f: S) -> Self {
        let mut out = DifferentialForm::zero(0);
        out.set(0, f);
        out
    }

    /// `a dz + b dz̄ + c du`.
    pub fn one_form(a: S, b: S, c: S) -> Self {
        let mut out = DifferentialForm::zero(1);
        out.set(bit(Var::Z), a);
        out.set(bit(Var::Zb), b);
        out.set(bit(Var::U), c);
        out
    }

    /// The basis covector `d v`.
    pub fn d_var(v: Var) -> Self {
        let mut out = DifferentialForm::zero(1);
        out.set(bit(v), S::one());
        out
    }

    fn set(&mut self, mask: u8, f: S) {
        if f.is_exact_zero() {
            self.comps.remove(&mask);
        } else {
            self.comps.insert(mask, f);
        }
    }

    fn accumulate(&mut self, mask: u8, f: S) {
        let cur = self.comps.remove(&mask).unwrap_or_else(S::zero);
        self.set(mask, cur.plus(&f));
    }

    pub fn degree(&self) -> u8 {
        self.degree
    }

    /// Component on a sorted multi-index, e.g. `&[Var::Z, Var::U]` for `dz∧du`.
    pub fn component(&self, idx: &[Var]) -> S {
        let mask = idx.iter().fold(0, |m, v| m | bit(*v));
        self.comps.get(&mask).cloned().unwrap_or_else(S::zero)
    }

    /// Coefficients of a 1-form on `(dz, dz̄, du)`.
    pub fn one_form_coeffs(&self) -> Result<[S; 3], FormError> {
        self.expect_degree(1)?;
        Ok([self.component(&[Var::Z]), self.component(&[Var::Zb]), self.component(&[Var::U])])
    }

    fn expect_degree(&self, d: u8) -> Result<(), FormError> {
        if self.degree != d {
            return Err(FormError::WrongDegree { expected: d, got: self.degree });
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.comps.values().all(S::is_zero)
    }

    pub fn plus(&self, o: &Self) -> Result<Self, FormError> {
        if self.degree != o.degree {
            return Err(FormError::WrongDegree { expected: self.degree, got: o.degree });
        }
        let mut out = self.clone();
        for (m, f) in &o.comps {
            out.accumulate(*m, f.clone());
        }
        Ok(out)
    }

    pub fn minus(&self, o: &Self) -> Result<Self, FormError> {
        self.plus(&o.scale_const(&GaussRational::from_int(-1)))
    }

    pub fn scale(&self, f: &S) -> Self {
        let mut out = DifferentialForm::zero(self.degree);
        for (m, c) in &self.comps {
            out.set(*m, c.times(f));
        }
        out
    }

    pub fn scale_const(&self, c: &GaussRational) -> Self {
        let mut out = DifferentialForm::zero(self.degree);
        for (m, v) in &self.comps {
            out.set(*m, v.scaled(c));
        }
        out
    }

    pub fn wedge(&self, o: &Self) -> Result<Self, FormError> {
        let deg = self.degree + o.degree;
        if deg > 3 {
            return Err(FormError::DegreeOverflow(deg));
        }
        let mut out = DifferentialForm::zero(deg);
        for (ma, fa) in &self.comps {
            for (mb, fb) in &o.comps {
                if ma & mb != 0 {
                    continue;
                }
                let sign = wedge_sign(*ma, *mb);
                out.accumulate(ma | mb, fa.times(fb).scaled(&GaussRational::from_int(sign)));
            }
        }
        Ok(out)
    }

    /// Exterior derivative.
    pub fn d(&self) -> Result<Self, FormError> {
        if self.degree >= 3 {
            return Ok(DifferentialForm::zero(3.min(self.degree + 1)));
        }
        let mut out = DifferentialForm::zero(self.degree + 1);
        for (m, f) in &self.comps {
            for j in 0..3 {
                let b = 1u8 << j;
                if m & b != 0 {
                    continue;
                }
                let df = f.diff(var_of(j))?;
                let sign = wedge_sign(b, *m);
                out.accumulate(m | b, df.scaled(&GaussRational::from_int(sign)));
            }
        }
        Ok(out)
    }

    pub fn conj(&self) -> Self {
        let mut out = DifferentialForm::zero(self.degree);
        for (m, f) in &self.comps {
            let (cm, sign) = conj_mask(*m);
            out.accumulate(cm, f.conj().scaled(&GaussRational::from_int(sign)));
        }
        out
    }

    /// Interior product `ι_X`.
    pub fn contract(&self, x: &VectorField<S>) -> Result<Self, FormError> {
        if self.degree == 0 {
            return Err(FormError::WrongDegree { expected: 1, got: 0 });
        }
        let mut out = DifferentialForm::zero(self.degree - 1);
        for (m, f) in &self.comps {
            let mut position = 0;
            for j in 0..3 {
                let b = 1u8 << j;
                if m & b == 0 {
                    continue;
                }
                let sign = if position % 2 == 0 { 1 } else { -1 };
                position += 1;
                let xj = &x.comps[j];
                if xj.is_exact_zero() {
                    continue;
                }
                out.accumulate(m & !b, f.times(xj).scaled(&GaussRational::from_int(sign)));
            }
        }
        Ok(out)
    }

    /// Full evaluation on `degree` vector fields, `ω(X₁, …, X_k)`.
    pub fn eval(&self, xs: &[&VectorField<S>]) -> Result<S, FormError> {
        self.expect_degree(xs.len() as u8)?;
        let mut cur = self.clone();
        for x in xs {
            cur = cur.contract(x)?;
        }
        Ok(cur.comps.get(&0).cloned().unwrap_or_else(S::zero))
    }
}

impl<S: Scalar> fmt::Display for DifferentialForm<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comps.is_empty() {
            return write!(f, "0");
        }
        let names = ["dz", "dzb", "du"];
        let parts: Vec<String> = self
            .comps
            .iter()
            .map(|(m, c)| {
                let basis: Vec<&str> = (0..3).filter(|j| m & (1 << j) != 0).map(|j| names[j]).collect();
                if basis.is_empty() {
                    format!("{c}")
                } else {
                    format!("({c}) {}", basis.join("^"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `a ∂z + b ∂z̄ + c ∂u`.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField<S: Scalar> {
    comps: [S; 3],
}

impl<S: Scalar> VectorField<S> {
    pub fn new(dz: S, dzb: S, du: S) -> Self {
        VectorField { comps: [dz, dzb, du] }
    }

    pub fn coord(v: Var) -> Self {
        let mut c = [S::zero(), S::zero(), S::zero()];
        c[v.index()] = S::one();
        VectorField { comps: c }
    }

    pub fn comps(&self) -> &[S; 3] {
        &self.comps
    }

    pub fn component(&self, v: Var) -> &S {
        &self.comps[v.index()]
    }

    /// `X f`.
    pub fn apply(&self, f: &S) -> Result<S, SymbolicError> {
        let mut acc = S::zero();
        for (j, c) in self.comps.iter().enumerate() {
            if c.is_exact_zero() {
                continue;
            }
            acc = acc.plus(&c.times(&f.diff(var_of(j))?));
        }
        Ok(acc)
    }

    pub fn scale(&self, f: &S) -> Self {
        VectorField { comps: [self.comps[0].times(f), self.comps[1].times(f), self.comps[2].times(f)] }
    }

    pub fn plus(&self, o: &Self) -> Self {
        VectorField {
            comps: [
                self.comps[0].plus(&o.comps[0]),
                self.comps[1].plus(&o.comps[1]),
                self.comps[2].plus(&o.comps[2]),
            ],
        }
    }

    pub fn conj(&self) -> Self {
        VectorField { comps: [self.comps[1].conj(), self.comps[0].conj(), self.comps[2].conj()] }
    }

    /// Pairing with a 1-form.
    pub fn pair(&self, form: &DifferentialForm<S>) -> Result<S, FormError> {
        let c = form.one_form_coeffs()?;
        let mut acc = S::zero();
        for j in 0..3 {
            acc = acc.plus(&c[j].times(&self.comps[j]));
        }
        Ok(acc)
    }
}

impl<S: Scalar> fmt::Display for VectorField<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) d/dz + ({}) d/dzb + ({}) d/du", self.comps[0], self.comps[1], self.comps[2])
    }
}

pub(crate) fn det3<S: Scalar>(m: &[[S; 3]; 3]) -> S {
    let minor = |a: usize, b: usize, c: usize, d: usize| m[1][a].times(&m[2][b]).minus(&m[1][c].times(&m[2][d]));
    m[0][0]
        .times(&minor(1, 2, 2, 1))
        .minus(&m[0][1].times(&minor(0, 2, 2, 0)))
        .plus(&m[0][2].times(&minor(0, 1, 1, 0)))
}

/// Inverse of a 3×3 matrix by cofactors and one exact division.
pub(crate) fn inverse3<S: Scalar>(m: &[[S; 3]; 3]) -> Result<[[S; 3]; 3], FormError> {
    let det = det3(m);
    if det.is_zero() {
        return Err(FormError::SingularCoframe);
    }
    let inv_det = det.recip().map_err(|_| FormError::SingularCoframe)?;
    let cof = |r: usize, c: usize| {
        let rows: Vec<usize> = (0..3).filter(|&i| i != r).collect();
        let cols: Vec<usize> = (0..3).filter(|&j| j != c).collect();
        let v = m[rows[0]][cols[0]]
            .times(&m[rows[1]][cols[1]])
            .minus(&m[rows[0]][cols[1]].times(&m[rows[1]][cols[0]]));
        if (r + c) % 2 == 0 {
            v
        } else {
            v.negated()
        }
    };
    let mut out: [[S; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| S::zero()));
    for (i, row) in out.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            // (adj)_{ij} = cof(j, i)
            *entry = cof(j, i).times(&inv_det);
        }
    }
    Ok(out)
}

/// A pseudohermitian coframe `(θ, θ¹, θ¹̄)` with `θ¹̄ = conj(θ¹)`.
#[derive(Clone, Debug)]
pub struct AdaptedCoframe<S: Scalar> {
    pub theta: DifferentialForm<S>,
    pub theta1: DifferentialForm<S>,
    pub theta1bar: DifferentialForm<S>,
    pub det: S,
}

/// Components of a form on `{θ, θ¹, θ¹̄}` and their wedges, keyed by sorted
/// multi-index over `0 = θ`, `1 = θ¹`, `2 = θ¹̄`.
#[derive(Clone, Debug)]
pub struct CoframeComponents<S: Scalar> {
    pub degree: u8,
    pub comps: BTreeMap<Vec<usize>, S>,
}

impl<S: Scalar> CoframeComponents<S> {
    pub fn get(&self, idx: &[usize]) -> S {
        self.comps.get(idx).cloned().unwrap_or_else(S::zero)
    }
}

impl<S: Scalar> AdaptedCoframe<S> {
    pub fn new(theta: DifferentialForm<S>, theta1: DifferentialForm<S>) -> Result<Self, FormError> {
        theta.expect_degree(1)?;
        theta1.expect_degree(1)?;
        let theta1bar = theta1.conj();
        let det = det3(&Self::matrix_of(&theta, &theta1, &theta1bar)?);
        if det.is_zero() {
            return Err(FormError::SingularCoframe);
        }
        Ok(AdaptedCoframe { theta, theta1, theta1bar, det })
    }

    fn matrix_of(
        a: &DifferentialForm<S>,
        b: &DifferentialForm<S>,
        c: &DifferentialForm<S>,
    ) -> Result<[[S; 3]; 3], FormError> {
        Ok([a.one_form_coeffs()?, b.one_form_coeffs()?, c.one_form_coeffs()?])
    }

    pub fn members(&self) -> [&DifferentialForm<S>; 3] {
        [&self.theta, &self.theta1, &self.theta1bar]
    }

    /// Dual frame `(T, Z₁, Z₁̄)`: `θ(T) = 1`, `θ¹(Z₁) = 1`, all other pairings 0.
    pub fn dual_frame(&self) -> Result<[VectorField<S>; 3], FormError> {
        let m = Self::matrix_of(&self.theta, &self.theta1, &self.theta1bar)?;
        let inv = inverse3(&m)?;
        // columns of the inverse are the dual vectors
        Ok(std::array::from_fn(|k| {
            VectorField::new(inv[0][k].clone(), inv[1][k].clone(), inv[2][k].clone())
        }))
    }

    /// Components of `form` along the coframe, read off by evaluating on the
    /// dual frame.
    pub fn expand(&self, form: &DifferentialForm<S>) -> Result<CoframeComponents<S>, FormError> {
        let frame = self.dual_frame()?;
        let mut comps = BTreeMap::new();
        let idx_sets: Vec<Vec<usize>> = match form.degree() {
            0 => vec![vec![]],
            1 => vec![vec![0], vec![1], vec![2]],
            2 => vec![vec![0, 1], vec![0, 2], vec![1, 2]],
            _ => vec![vec![0, 1, 2]],
        };
        for idx in idx_sets {
            let vs: Vec<&VectorField<S>> = idx.iter().map(|&k| &frame[k]).collect();
            let v = form.eval(&vs)?;
            if !v.is_exact_zero() {
                comps.insert(idx, v);
            }
        }
        Ok(CoframeComponents { degree: form.degree(), comps })
    }

    /// Inverse of [`expand`](Self::expand).
    pub fn assemble(&self, c: &CoframeComponents<S>) -> Result<DifferentialForm<S>, FormError> {
        let mut out = DifferentialForm::zero(c.degree);
        for (idx, v) in &c.comps {
            let mut w = DifferentialForm::scalar(v.clone());
            for &k in idx {
                w = w.wedge(self.members()[k])?;
            }
            out = out.plus(&w)?;
        }
        Ok(out)
    }
}

/// The Reeb field of a contact form: `θ(T) = 1` and `ι_T dθ = 0`.
pub fn reeb_field<S: Scalar>(theta: &DifferentialForm<S>) -> Result<VectorField<S>, FormError> {
    theta.expect_degree(1)?;
    let dtheta = theta.d()?;
    // kernel of the antisymmetric matrix a_jk = dθ(e_j, e_k) is (a12, −a02, a01)
    let a01 = dtheta.component(&[Var::Z, Var::Zb]);
    let a02 = dtheta.component(&[Var::Z, Var::U]);
    let a12 = dtheta.component(&[Var::Zb, Var::U]);
    let n = VectorField::new(a12, a02.negated(), a01);
    let norm = n.pair(theta)?;
    if norm.is_zero() {
        return Err(FormError::NotContact);
    }
    let inv = norm.recip().map_err(|_| FormError::NotContact)?;
    Ok(n.scale(&inv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::{LogExpr, Poly};

    type F = DifferentialForm<LogExpr>;

    fn e(v: Var) -> LogExpr {
        LogExpr::var(v)
    }

    fn c(re_n: i64, re_d: i64, im_n: i64, im_d: i64) -> LogExpr {
        LogExpr::constant(GaussRational::from_parts(re_n, re_d, im_n, im_d))
    }

    /// θ̊ = ½(du − i z̄ dz + i z dz̄).
    fn flat_theta() -> F {
        F::one_form(
            e(Var::Zb).times(&c(0, 1, -1, 2)),
            e(Var::Z).times(&c(0, 1, 1, 2)),
            c(1, 2, 0, 1),
        )
    }

    #[test]
    fn wedge_antisymmetry() {
        let dz = F::d_var(Var::Z);
        let dzb = F::d_var(Var::Zb);
        assert!(dz.wedge(&dz).unwrap().is_zero());
        let a = dz.wedge(&dzb).unwrap();
        let b = dzb.wedge(&dz).unwrap();
        assert!(a.plus(&b).unwrap().is_zero());
        assert!(a.wedge(&a).is_err());
    }

    #[test]
    fn flat_contact_form() {
        let th = flat_theta();
        let dth = th.d().unwrap();
        // dθ̊ = i dz ∧ dz̄
        let expect = F::d_var(Var::Z).wedge(&F::d_var(Var::Zb)).unwrap().scale_const(&GaussRational::i());
        assert!(dth.minus(&expect).unwrap().is_zero());
        // θ̊ ∧ dθ̊ = (i/2) dz∧dz̄∧du, constant and nonzero
        let vol = th.wedge(&dth).unwrap();
        assert!(vol.component(&[Var::Z, Var::Zb, Var::U]).minus(&c(0, 1, 1, 2)).is_zero());
        assert!(dth.d().unwrap().is_zero());
    }

    #[test]
    fn reeb_of_flat_and_scaled_forms() {
        let th = flat_theta();
        let t = reeb_field(&th).unwrap();
        assert!(t.component(Var::U).minus(&LogExpr::from_int(2)).is_zero());
        assert!(t.component(Var::Z).is_zero() && t.component(Var::Zb).is_zero());
        let t3 = reeb_field(&th.scale_const(&GaussRational::from_int(3))).unwrap();
        assert!(t3.component(Var::U).minus(&c(2, 3, 0, 1)).is_zero());
        let bad = F::d_var(Var::U);
        assert_eq!(reeb_field(&bad).unwrap_err(), FormError::NotContact);
    }

    #[test]
    fn coframe_expansion_roundtrip() {
        let th = flat_theta();
        let cf = AdaptedCoframe::new(th.clone(), F::d_var(Var::Z)).unwrap();
        let comps = cf.expand(&F::d_var(Var::Z)).unwrap();
        assert!(comps.get(&[1]).minus(&LogExpr::one()).is_zero());
        assert!(comps.get(&[0]).is_zero() && comps.get(&[2]).is_zero());
        let dth = cf.expand(&th.d().unwrap()).unwrap();
        assert!(dth.get(&[1, 2]).minus(&LogExpr::constant(GaussRational::i())).is_zero());
        let w = F::one_form(e(Var::U), e(Var::Z).times(&e(Var::Zb)), LogExpr::s())
            .wedge(&F::one_form(LogExpr::one(), e(Var::U), e(Var::Z)))
            .unwrap();
        let back = cf.assemble(&cf.expand(&w).unwrap()).unwrap();
        assert!(back.minus(&w).unwrap().is_zero());
        let singular = AdaptedCoframe::new(F::d_var(Var::Z), F::d_var(Var::Z));
        assert!(singular.is_err());
    }

    #[test]
    fn leibniz_and_d_squared() {
        let f = LogExpr::log_s().times(&e(Var::Z));
        let g = LogExpr::from_poly(&Poly::var(Var::U) + &Poly::one()).recip().unwrap();
        let d_fg = F::scalar(f.times(&g)).d().unwrap();
        let rhs = F::scalar(f.clone()).d().unwrap().scale(&g).plus(&F::scalar(g.clone()).d().unwrap().scale(&f)).unwrap();
        assert!(d_fg.minus(&rhs).unwrap().is_zero());
        assert!(d_fg.d().unwrap().is_zero());
        let one = F::one_form(f.clone(), g.clone(), f.times(&g));
        assert!(one.d().unwrap().d().unwrap().is_zero());
    }

    #[test]
    fn contraction_is_graded_derivation() {
        let a = F::one_form(e(Var::U), e(Var::Z), LogExpr::one());
        let b = F::one_form(e(Var::Zb), LogExpr::s(), e(Var::Z));
        let x = VectorField::new(e(Var::Z), LogExpr::from_int(2), e(Var::U));
        let lhs = a.wedge(&b).unwrap().contract(&x).unwrap();
        let rhs = b
            .scale(&x.pair(&a).unwrap())
            .minus(&a.scale(&x.pair(&b).unwrap()))
            .unwrap();
        assert!(lhs.minus(&rhs).unwrap().is_zero());
    }

    #[test]
    fn inexact_zero_components_keep_their_error_order() {
        use crate::symbolic::GradedSeries;
        // ∂_u of 1 + O(ρ⁸) is 0 + O(ρ⁶) and must not vanish from dθ
        let a = GradedSeries::new(Poly::one(), 8);
        let f = DifferentialForm::one_form(a, GradedSeries::zero(), GradedSeries::zero());
        let df = f.d().unwrap();
        assert_eq!(df.component(&[Var::Z, Var::U]).error_order(), Some(6));
    }
}
