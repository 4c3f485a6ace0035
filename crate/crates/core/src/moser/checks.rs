//! Comparisons of the Moser structure against printed expansions, order
//! patterns, the chain restriction and the Fefferman determinant.

use serde::Serialize;

use super::{tracked_order, GoldenExpansion, MoserData, MoserError, MoserStructure};
use crate::exterior::{det3, DifferentialForm};
use crate::symbolic::{GaussRational, GradedSeries, Poly, Var};

/// Outcome of comparing one engine quantity with a printed series.
#[derive(Clone, Debug, Serialize)]
pub struct ExpansionCheck {
    pub id: String,
    pub display: String,
    pub printed_order: u32,
    pub tracked_order: Option<u32>,
    /// Weighted order below which the two sides were compared.
    pub compared_to: u32,
    /// Lowest weight at which engine and printed series differ, if below
    /// `compared_to`.
    pub first_difference: Option<u32>,
    pub residual: String,
    pub pass: bool,
}

fn engine_quantity(ms: &MoserStructure, id: &str) -> Result<GradedSeries, MoserError> {
    let st = &ms.solved;
    Ok(match id {
        "lambda" => st.z1.component(Var::U).clone(),
        "connection_trace" => st.g_inv.times(&st.z1.apply(&st.omega_frame[1])?),
        "levi_derivative" => st.g_inv.times(&st.z1.apply(&st.g)?),
        "torsion" => st.torsion.clone(),
        "curvature" => st.r.clone(),
        "pseudo_einstein" => st.pseudo_einstein_tensor()?,
        other => return Err(MoserError::UnknownExpansion(other.to_string())),
    })
}

/// Term-by-term comparison of an engine quantity with its printed series,
/// up to the smaller of the printed and the tracked error order.
pub fn verify_expansion(ms: &MoserStructure, golden: &GoldenExpansion) -> Result<ExpansionCheck, MoserError> {
    let engine = engine_quantity(ms, &golden.id)?;
    let printed = golden.evaluate(&ms.data)?;
    let tracked = engine.error_order();
    let compared_to = golden.error_order.min(tracked.unwrap_or(u32::MAX));
    let diff = engine.poly() - printed.poly();
    let low = diff.truncate(compared_to);
    Ok(ExpansionCheck {
        id: golden.id.clone(),
        display: golden.display.clone(),
        printed_order: golden.error_order,
        tracked_order: tracked,
        compared_to,
        first_difference: low.min_weight(),
        residual: low.to_string(),
        pass: low.is_zero(),
    })
}

/// Measured weighted order of one component of an order pattern.
#[derive(Clone, Debug, Serialize)]
pub struct OrderComponent {
    pub name: String,
    /// Printed order; `None` means the component is absent from the printed
    /// pattern and must vanish.
    pub printed: Option<u32>,
    /// Lowest weight present; `None` when zero to the tracked order.
    pub measured: Option<u32>,
    pub tracked: Option<u32>,
    pub pass: bool,
}

fn component(name: &str, printed: Option<u32>, x: &GradedSeries) -> OrderComponent {
    let tracked = x.error_order();
    let need = printed.unwrap_or(u32::MAX).min(tracked.unwrap_or(u32::MAX));
    let measured = x.valuation();
    OrderComponent {
        name: name.to_string(),
        printed,
        measured,
        tracked,
        pass: measured.map_or(true, |m| m >= need),
    }
}

fn minus_one(x: &GradedSeries) -> GradedSeries {
    x.minus(&GradedSeries::one())
}

/// Components of a 1-form along `(θ̊, dz, dz̄)`:
/// `p du + q dz + r dz̄ = 2p θ̊ + (q + i z̄ p) dz + (r − i z p) dz̄`.
fn flat_basis(f: &DifferentialForm<GradedSeries>) -> Result<[GradedSeries; 3], MoserError> {
    let [q, r, p] = f.one_form_coeffs()?;
    let i = GaussRational::i();
    let z = GradedSeries::exact_unbounded(Poly::var(Var::Z));
    let zb = GradedSeries::exact_unbounded(Poly::var(Var::Zb));
    Ok([
        p.scaled(&GaussRational::from_int(2)),
        q.plus(&zb.times(&p).scaled(&i)),
        r.minus(&z.times(&p).scaled(&i)),
    ])
}

/// Orders of the contact form, coframe, frame, connection, torsion,
/// curvature and Levi form, expanded along the flat coframe.
pub fn order_pattern(ms: &MoserStructure) -> Result<Vec<OrderComponent>, MoserError> {
    let st = &ms.solved;
    let [t0, t1, t2] = flat_basis(&st.theta)?;
    let [c0, c1, c2] = flat_basis(&st.theta1)?;
    let [w0, w1, w2] = flat_basis(&st.omega)?;
    let i = GaussRational::i();
    let zb = GradedSeries::exact_unbounded(Poly::var(Var::Zb));
    let z1u = st.z1.component(Var::U).minus(&zb.scaled(&i));
    Ok(vec![
        component("theta.flat - 1", Some(4), &minus_one(&t0)),
        component("theta.dz", Some(5), &t1),
        component("theta.dzb", Some(5), &t2),
        component("theta1.flat", Some(3), &c0),
        component("theta1.dz - 1", Some(8), &minus_one(&c1)),
        component("theta1.dzb", Some(8), &c2),
        component("z1.du - i zb", Some(5), &z1u),
        component("omega.flat", Some(2), &w0),
        component("omega.dz", Some(3), &w1),
        component("omega.dzb", Some(7), &w2),
        component("torsion", Some(2), &st.torsion),
        component("curvature", Some(2), &st.r),
        component("g - 1", Some(4), &minus_one(&st.g)),
        component("g_inv - 1", Some(4), &minus_one(&st.g_inv)),
    ])
}

/// Coefficients of `Δ_b` in the flat operator basis
/// `{Δ̊_b, ∂u², Z̊₁∂u, Z̊₁̄∂u, Z̊₁, Z̊₁̄, ∂u, Z̊₁Z̊₁, Z̊₁̄Z̊₁̄}`, read off from
/// its action on coordinate probes.
pub fn sublaplacian_pattern(ms: &MoserStructure) -> Result<Vec<OrderComponent>, MoserError> {
    let st = &ms.solved;
    let n = ms.data.order;
    let x = |m: [u32; 3]| GradedSeries::exact(Poly::monomial(GaussRational::one(), m), n);
    let lap = |f: &GradedSeries| st.sublaplacian(f);
    let (z, zb, u) = (x([1, 0, 0]), x([0, 1, 0]), x([0, 0, 1]));
    let bz = lap(&z)?;
    let bzb = lap(&zb)?;
    let bu = lap(&u)?;
    let half = GaussRational::ratio(1, 2);
    let czz = lap(&x([2, 0, 0]))?.minus(&z.times(&bz).scaled(&GaussRational::from_int(2))).scaled(&half);
    let czbzb = lap(&x([0, 2, 0]))?.minus(&zb.times(&bzb).scaled(&GaussRational::from_int(2))).scaled(&half);
    let cuu = lap(&x([0, 0, 2]))?.minus(&u.times(&bu).scaled(&GaussRational::from_int(2))).scaled(&half);
    let czzb = lap(&x([1, 1, 0]))?.minus(&z.times(&bzb)).minus(&zb.times(&bz));
    let czu = lap(&x([1, 0, 1]))?.minus(&z.times(&bu)).minus(&u.times(&bz));
    let czbu = lap(&x([0, 1, 1]))?.minus(&zb.times(&bu)).minus(&u.times(&bzb));

    let i = GaussRational::i();
    let two_i = GaussRational::from_parts(0, 1, 2, 1);
    let kappa = czz;
    let kappa_b = czbzb;
    let alpha = czzb.scaled(&half);
    let gamma = czu.plus(&z.times(&alpha).scaled(&two_i)).minus(&zb.times(&kappa).scaled(&two_i));
    let gamma_b = czbu.minus(&zb.times(&alpha).scaled(&two_i)).plus(&z.times(&kappa_b).scaled(&two_i));
    let beta = cuu
        .minus(&z.times(&zb).times(&alpha).scaled(&GaussRational::from_int(2)))
        .minus(&zb.times(&gamma).scaled(&i))
        .plus(&z.times(&gamma_b).scaled(&i))
        .plus(&zb.times(&zb).times(&kappa))
        .plus(&z.times(&z).times(&kappa_b));
    let delta = bz;
    let delta_b = bzb;
    let eps = bu.minus(&zb.times(&delta).scaled(&i)).plus(&z.times(&delta_b).scaled(&i));
    Ok(vec![
        component("flat_sublaplacian - 1", Some(4), &minus_one(&alpha)),
        component("du^2", Some(10), &beta),
        component("z1 du", Some(5), &gamma),
        component("z1bar du", Some(5), &gamma_b),
        component("z1", Some(7), &delta),
        component("z1bar", Some(7), &delta_b),
        component("du", Some(4), &eps),
        component("z1 z1", None, &kappa),
        component("z1bar z1bar", None, &kappa_b),
    ])
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainReport {
    /// The pseudo-Einstein tensor at `z = 0`.
    pub restriction: String,
    pub tracked_order: Option<u32>,
    pub pass: bool,
}

/// Restricts the pseudo-Einstein tensor to the chain `z = 0`.
pub fn chain_check(ms: &MoserStructure) -> Result<ChainReport, MoserError> {
    let pe = ms.solved.pseudo_einstein_tensor()?;
    let r = pe.restrict_chain();
    Ok(ChainReport { restriction: r.to_string(), tracked_order: tracked_order(&[&pe]), pass: r.is_zero() })
}

/// Coefficient of `z` in `E_{zzzz̄z̄}`, as a polynomial in `u`.
pub fn cartan_coefficient(md: &MoserData) -> Poly {
    let d = md.e_derivative([3, 2, 0]);
    Poly::from_terms(d.terms().filter(|(m, _)| m[0] == 1 && m[1] == 0).map(|(m, c)| ([0, 0, m[2]], c.clone())))
}

/// `a + v·b` with `a, b` polynomials in `(z, z̄, u)` and `w = u + iv`.
#[derive(Clone, Debug, PartialEq)]
pub struct VPolynomial {
    pub a: Poly,
    pub b: Poly,
}

impl VPolynomial {
    fn d(p: &Poly, vars: &[Var]) -> Poly {
        vars.iter().fold(p.clone(), |acc, v| acc.diff(*v))
    }

    /// `∂^vars (a + v b)` at `v = graph`, where `dv` is the number of
    /// `∂_v` factors (at most one survives).
    fn eval(&self, vars: &[Var], dv: u32, graph: &Poly) -> Poly {
        match dv {
            0 => &Self::d(&self.a, vars) + &(graph * &Self::d(&self.b, vars)),
            1 => Self::d(&self.b, vars),
            _ => Poly::zero(),
        }
    }
}

/// `J[ψ] = det[[ψ, ψ_z̄, ψ_w̄], [ψ_z, ψ_zz̄, ψ_zw̄], [ψ_w, ψ_wz̄, ψ_ww̄]]` for
/// `ψ = κ·(a + v b)` with `κ³ = cube_scale`, evaluated on `v = graph`.
pub fn fefferman_j(psi: &VPolynomial, cube_scale: &GaussRational, graph: &Poly) -> Poly {
    use Var::{Zb, U, Z};
    let half = GaussRational::ratio(1, 2);
    let i = GaussRational::i();
    let e = |vars: &[Var], dv: u32| psi.eval(vars, dv, graph);
    // ∂_w = ½(∂_u − i∂_v), ∂_w̄ = ½(∂_u + i∂_v)
    let w = |vars: &[Var], sign: i64| {
        let mut with_u = vars.to_vec();
        with_u.push(U);
        &e(&with_u, 0) + &e(vars, 1).scale(&(&i * &GaussRational::from_int(sign)))
    };
    let p = e(&[], 0);
    let pz = e(&[Z], 0);
    let pzb = e(&[Zb], 0);
    let pw = w(&[], -1).scale(&half);
    let pwb = w(&[], 1).scale(&half);
    let pzzb = e(&[Z, Zb], 0);
    let pzwb = w(&[Z], 1).scale(&half);
    let pwzb = w(&[Zb], -1).scale(&half);
    // ∂_w∂_w̄ = ¼(∂_u² + ∂_v²) and ∂_v² kills an affine function
    let pwwb = e(&[U, U], 0).scale(&GaussRational::ratio(1, 4));
    let s = |p: Poly| GradedSeries::exact_unbounded(p);
    let m = [[s(p), s(pzb), s(pwb)], [s(pz), s(pzzb), s(pzwb)], [s(pw), s(pwzb), s(pwwb)]];
    det3(&m).poly().scale(cube_scale)
}
