//! Moser normal form `v = |z|² − E(u, z, z̄)` and its pseudohermitian
//! structure in graded arithmetic.

mod checks;
mod golden;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exterior::{DifferentialForm, FormError};
use crate::structure::{solve_structure, PseudohermitianStructure, StructureError};
use crate::symbolic::{GaussRational, GradedSeries, Poly, Scalar, SymbolicError, Var};

pub use checks::{
    cartan_coefficient, chain_check, fefferman_j, order_pattern, sublaplacian_pattern, verify_expansion,
    ChainReport, ExpansionCheck, OrderComponent, VPolynomial,
};
pub use golden::{Golden, GoldenExpansion, GoldenTerm, DEFAULT_GOLDEN};

pub const DEFAULT_ORDER: u32 = 8;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum MoserError {
    #[error("truncation order {0} is too low to see E (need at least 6)")]
    OrderTooLow(u32),
    #[error("{0} must be a polynomial in u alone")]
    NotUnivariate(&'static str),
    #[error("c33 must be real")]
    NonRealC33,
    #[error("E must be real")]
    NonRealE,
    #[error("E has a term of weight {0} below 6")]
    LowWeight(u32),
    #[error("golden data: {0}")]
    Golden(String),
    #[error("unknown expansion `{0}`")]
    UnknownExpansion(String),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
}

impl From<FormError> for MoserError {
    fn from(e: FormError) -> Self {
        MoserError::Structure(StructureError::Form(e))
    }
}

/// Normal-form data: `E = −c₄₂z⁴z̄² − c̄₄₂z²z̄⁴ − c₃₃z³z̄³ + extra`.
#[derive(Clone, Debug, PartialEq)]
pub struct MoserData {
    pub c42: Poly,
    pub c33: Poly,
    /// Additional real terms of `E`, weight ≥ 6 unless built unchecked.
    pub extra: Poly,
    pub order: u32,
}

fn only_u(p: &Poly) -> bool {
    p.terms().all(|(m, _)| m[0] == 0 && m[1] == 0)
}

impl MoserData {
    pub fn new(c42: Poly, c33: Poly, order: u32) -> Result<Self, MoserError> {
        MoserData::with_extra(c42, c33, Poly::zero(), order)
    }

    pub fn with_extra(c42: Poly, c33: Poly, extra: Poly, order: u32) -> Result<Self, MoserError> {
        let md = MoserData::unchecked(c42, c33, extra, order)?;
        if let Some(w) = md.e().min_weight() {
            if w < 6 {
                return Err(MoserError::LowWeight(w));
            }
        }
        Ok(md)
    }

    /// Skips the weight check on `extra`, for negative controls that leave
    /// normal form on purpose.
    pub fn unchecked(c42: Poly, c33: Poly, extra: Poly, order: u32) -> Result<Self, MoserError> {
        if order < 6 {
            return Err(MoserError::OrderTooLow(order));
        }
        if !only_u(&c42) {
            return Err(MoserError::NotUnivariate("c42"));
        }
        if !only_u(&c33) {
            return Err(MoserError::NotUnivariate("c33"));
        }
        if !c33.is_real() {
            return Err(MoserError::NonRealC33);
        }
        if !extra.is_real() {
            return Err(MoserError::NonRealE);
        }
        Ok(MoserData { c42, c33, extra, order })
    }

    pub fn flat(order: u32) -> Result<Self, MoserError> {
        MoserData::new(Poly::zero(), Poly::zero(), order)
    }

    /// Random rational `c₄₂` (complex) and `c₃₃` (real) of degree ≤ 2 in `u`.
    pub fn random(seed: u64, order: u32) -> Result<Self, MoserError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut coeff = |complex: bool| {
            let d = rng.gen_range(1..=4);
            let re = rng.gen_range(-5..=5);
            let im = if complex { rng.gen_range(-5..=5) } else { 0 };
            GaussRational::from_parts(re, d, im, d)
        };
        let mut c42 = Poly::zero();
        let mut c33 = Poly::zero();
        for k in 0..=2u32 {
            c42.add_term([0, 0, k], &coeff(true));
            c33.add_term([0, 0, k], &coeff(false));
        }
        MoserData::new(c42, c33, order)
    }

    pub fn with_order(&self, order: u32) -> Result<Self, MoserError> {
        MoserData::unchecked(self.c42.clone(), self.c33.clone(), self.extra.clone(), order)
    }

    /// `E(u, z, z̄)` as an exact polynomial.
    pub fn e(&self) -> Poly {
        let z42 = self.c42.shift(&[4, 2, 0]);
        let z24 = self.c42.conj().shift(&[2, 4, 0]);
        let z33 = self.c33.shift(&[3, 3, 0]);
        &(&(&(-&z42) - &z24) - &z33) + &self.extra
    }

    /// `∂_z^a ∂_z̄^b ∂_u^c E`.
    pub fn e_derivative(&self, d: [u32; 3]) -> Poly {
        let mut p = self.e();
        for (v, n) in Var::ALL.iter().zip(d) {
            for _ in 0..n {
                p = p.diff(*v);
            }
        }
        p
    }

    /// `r = v − |z|² + E` as an affine function of `v`.
    pub fn defining_function(&self) -> VPolynomial {
        VPolynomial { a: &self.e() - &Poly::monomial(GaussRational::one(), [1, 1, 0]), b: Poly::one() }
    }

    /// The graph `v = |z|² − E`.
    pub fn graph(&self) -> Poly {
        &Poly::monomial(GaussRational::one(), [1, 1, 0]) - &self.e()
    }

    fn series(&self, p: Poly) -> GradedSeries {
        GradedSeries::exact(p, self.order)
    }

    /// `θ = i∂r` restricted to the graph, in `(dz, dz̄, du)`.
    pub fn contact_form(&self) -> DifferentialForm<GradedSeries> {
        let i = GaussRational::i();
        let half = GaussRational::ratio(1, 2);
        let e_z = self.e_derivative([1, 0, 0]);
        let e_u = self.e_derivative([0, 0, 1]);
        let zb = Poly::var(Var::Zb);
        // θ_u = (1 + E_u²)/2, θ_z = i(z̄ − E_z)(−1 + iE_u)/2
        let tu = (&Poly::one() + &e_u.pow(2)).scale(&half);
        let tz = (&(&zb - &e_z) * &(&Poly::from_int(-1) + &e_u.scale(&i))).scale(&(&i * &half));
        let tzb = tz.conj();
        DifferentialForm::one_form(self.series(tz), self.series(tzb), self.series(tu))
    }
}

/// Moser data with its solved structure and the intermediate quantities of
/// the hand computation (`λ`, `a₁`, `a¹`, the coframe `dz − i a¹θ`, …).
#[derive(Clone, Debug)]
pub struct MoserStructure {
    pub data: MoserData,
    pub solved: PseudohermitianStructure<GradedSeries>,
    pub lambda: GradedSeries,
    pub g: GradedSeries,
    pub a1: GradedSeries,
    pub a_up: GradedSeries,
    pub theta1: DifferentialForm<GradedSeries>,
    pub omega: DifferentialForm<GradedSeries>,
    pub torsion: GradedSeries,
    pub r: GradedSeries,
}

pub fn moser_structure(md: &MoserData) -> Result<MoserStructure, MoserError> {
    let theta = md.contact_form();
    let solved = solve_structure(&theta, None)?;
    let s = |p: Poly| md.series(p);
    let i = GaussRational::i();
    let e = |d: [u32; 3]| s(md.e_derivative(d));

    let zb = s(Poly::var(Var::Zb));
    let lambda = zb
        .minus(&e([1, 0, 0]))
        .scaled(&i)
        .checked_div(&GradedSeries::one().plus(&e([0, 0, 1]).scaled(&i)))?;
    let lb = lambda.conj();
    let g = GradedSeries::one()
        .minus(&e([1, 1, 0]))
        .minus(&lambda.times(&e([0, 1, 1])))
        .minus(&lb.times(&e([1, 0, 1])))
        .minus(&lambda.times(&lb).times(&e([0, 0, 2])));
    let g_inv = g.recip()?;
    let a1 = e([1, 0, 1])
        .plus(&lambda.times(&e([0, 0, 2])))
        .negated()
        .checked_div(&GradedSeries::constant(i.clone()).plus(&e([0, 0, 1])))?;
    let a1b = a1.conj();
    let a_up = g_inv.times(&a1b);

    let dz = DifferentialForm::<GradedSeries>::d_var(Var::Z);
    let theta1 = dz.minus(&theta.scale(&a_up.scaled(&i)))?;
    let theta1b = theta1.conj();
    let z1 = &solved.z1;
    let z1b = &solved.z1bar;
    let omega_ring = theta1b.scale(&a1b).minus(&theta.scale(&z1.apply(&a_up)?.scaled(&i)))?;
    let corr = g_inv.times(&z1.apply(&g)?).minus(&a1);
    let omega = omega_ring.plus(&theta1.scale(&corr))?;
    let torsion = z1b.apply(&a_up)?.scaled(&i);

    // R = Z^1̄a₁̄ + Z₁a¹ + Z¹a₁ − Z¹Z^1̄g + a¹(Z^1̄g) − a¹a₁
    let up_bar = |f: &GradedSeries| -> Result<GradedSeries, MoserError> { Ok(g_inv.times(&z1.apply(f)?)) };
    let up = |f: &GradedSeries| -> Result<GradedSeries, MoserError> { Ok(g_inv.times(&z1b.apply(f)?)) };
    let r = up_bar(&a1b)?
        .plus(&z1.apply(&a_up)?)
        .plus(&up(&a1)?)
        .minus(&up(&up_bar(&g)?)?)
        .plus(&a_up.times(&up_bar(&g)?))
        .minus(&a_up.times(&a1));

    Ok(MoserStructure { data: md.clone(), solved, lambda, g, a1, a_up, theta1, omega, torsion, r })
}

impl MoserStructure {
    /// Differences between the generic solver and the hand computation;
    /// each must vanish to its tracked order.
    pub fn consistency(&self) -> Result<Vec<(&'static str, GradedSeries)>, MoserError> {
        let st = &self.solved;
        let mut out = vec![
            ("lambda", st.z1.component(Var::U).minus(&self.lambda)),
            ("levi_form", st.g.minus(&self.g)),
            ("torsion", st.torsion.minus(&self.torsion)),
            ("curvature", st.r.minus(&self.r)),
            ("connection_bar_component", st.omega_frame[1].minus(&self.a1.conj())),
        ];
        let th1 = st.theta1.minus(&self.theta1)?.one_form_coeffs()?;
        let om = st.omega.minus(&self.omega)?.one_form_coeffs()?;
        for (name, c) in [("coframe", th1), ("connection", om)] {
            for x in c {
                out.push((name, x));
            }
        }
        Ok(out)
    }
}

/// Smallest tracked order among the given series (`None` when all exact).
pub(crate) fn tracked_order(xs: &[&GradedSeries]) -> Option<u32> {
    xs.iter().filter_map(|x| x.error_order()).min()
}

#[cfg(test)]
mod tests;
