use super::*;
use crate::exterior::FormError;
use crate::symbolic::{LogAtom, LogExpr, Poly, RatFn, Var};

type F = DifferentialForm<LogExpr>;

fn c(re_n: i64, re_d: i64, im_n: i64, im_d: i64) -> LogExpr {
    LogExpr::constant(GaussRational::from_parts(re_n, re_d, im_n, im_d))
}

fn v(x: Var) -> LogExpr {
    LogExpr::var(x)
}

fn flat_theta() -> F {
    F::one_form(v(Var::Zb).times(&c(0, 1, -1, 2)), v(Var::Z).times(&c(0, 1, 1, 2)), c(1, 2, 0, 1))
}

fn flat() -> PseudohermitianStructure<LogExpr> {
    solve_structure(&flat_theta(), None).unwrap()
}

fn zeta() -> LogExpr {
    LogExpr::zeta()
}

fn zeta_bar() -> LogExpr {
    LogExpr::zeta().conj()
}

fn rat(p: Poly) -> RatFn {
    RatFn::from_poly(p)
}

fn one_plus_zzb() -> RatFn {
    rat(&Poly::one() + &Poly::monomial(GaussRational::one(), [1, 1, 0]))
}

#[test]
fn flat_model_is_trivial() {
    let st = flat();
    assert!(st.g.minus(&LogExpr::one()).is_zero());
    assert!(st.omega.is_zero());
    assert!(st.torsion.is_zero());
    assert!(st.r.is_zero());
    assert!(st.reeb.component(Var::U).minus(&LogExpr::from_int(2)).is_zero());
    // Z₁ = ∂z + i z̄ ∂u
    assert!(st.z1.component(Var::U).minus(&v(Var::Zb).times(&c(0, 1, 1, 1))).is_zero());
    // θ¹ = dz
    assert!(st.theta1.minus(&F::d_var(Var::Z)).unwrap().is_zero());
    st.check().unwrap();
}

#[test]
fn hint_matches_graph_frame() {
    let st = solve_structure(&flat_theta(), Some(&F::d_var(Var::Z))).unwrap();
    assert!(st.z1.comps().iter().zip(flat().z1.comps()).all(|(a, b)| a.minus(b).is_zero()));
    let bad = F::d_var(Var::Z).plus(&F::d_var(Var::U)).unwrap();
    assert!(matches!(solve_structure(&flat_theta(), Some(&bad)), Err(StructureError::HintNotAdmissible(_))));
}

#[test]
fn degenerate_inputs_are_rejected() {
    let err = solve_structure(&F::d_var(Var::U), None).unwrap_err();
    assert_eq!(err, StructureError::Form(FormError::NotContact));
    let err = solve_structure(&F::d_var(Var::Z), None).unwrap_err();
    assert!(matches!(err, StructureError::Form(FormError::NotContact) | StructureError::NoGraphFrame));
}

#[test]
fn curved_structure_satisfies_all_equations() {
    let st = flat();
    let f = ConformalFactor::log_of(&one_plus_zzb()).unwrap();
    let hat = conformal_change(&st, &f).unwrap();
    hat.check().unwrap();
    assert!(hat.r.is_real());
    assert!(hat.q_prime().unwrap().is_real());
    assert!(!hat.torsion.is_zero());
}

#[test]
fn flat_sublaplacian_oracles() {
    let st = flat();
    // Δ̊_b log ρ = (ζ + ζ̄)/(2ζζ̄)
    let lap = st.sublaplacian(&LogExpr::log_rho()).unwrap();
    let expect = zeta().plus(&zeta_bar()).checked_div(&zeta().times(&zeta_bar()).scaled(&GaussRational::from_int(2))).unwrap();
    assert!(lap.minus(&expect).is_zero());
    // 1/s is annihilated off the pole; constants trivially
    let inv_s = LogExpr::s().recip().unwrap();
    assert!(st.cr_laplacian(&inv_s).unwrap().is_zero());
    assert!(st.cr_laplacian(&LogExpr::from_int(7)).unwrap().is_zero());
    // log s is not
    assert!(!st.cr_laplacian(&LogExpr::log_s()).unwrap().is_zero());
}

#[test]
fn covariant_derivative_oracles() {
    let st = flat();
    let log_g = LogExpr::atom(LogAtom::log_two_pi()).negated().minus(&LogExpr::log_s());
    let f11 = st.covariant_derivative(&log_g, &Idx::parse_pattern("11").unwrap()).unwrap();
    let f1 = st.covariant_derivative(&log_g, &Idx::parse_pattern("1").unwrap()).unwrap();
    assert!(f11.minus(&f1.square().scaled(&GaussRational::from_int(2))).is_zero());
    for p in ["1", "1b", "11b", "1b10", "0"] {
        let pat = Idx::parse_pattern(p).unwrap();
        assert!(st.covariant_derivative(&LogExpr::from_int(3), &pat).unwrap().is_zero());
    }
    assert!(Idx::parse_pattern("1x").is_err());
    assert!(Idx::parse_pattern("11111").is_err());
    // on a curved structure the trace of the mixed second derivatives is Δ_b
    let hat = conformal_change(&st, &ConformalFactor::log_of(&one_plus_zzb()).unwrap()).unwrap();
    let f = LogExpr::from_poly(&Poly::var(Var::U) * &Poly::var(Var::Z));
    let a = hat.covariant_derivative(&f, &[Idx::One, Idx::Bar]).unwrap();
    let b = hat.covariant_derivative(&f, &[Idx::Bar, Idx::One]).unwrap();
    assert!(a.plus(&b).times(&hat.g_inv).minus(&hat.sublaplacian(&f).unwrap()).is_zero());
}

#[test]
fn p3_annihilates_pluriharmonics() {
    let st = flat();
    let z2 = zeta().square();
    let battery = [
        LogExpr::one(),
        zeta().re(),
        zeta().im(),
        z2.re(),
        LogExpr::log_zeta().re(),
        LogExpr::log_rho(),
        v(Var::U),
    ];
    for f in &battery {
        assert!(st.p3_operator(f).unwrap().is_zero(), "P3({f})");
    }
    assert!(!st.p3_operator(&LogExpr::from_poly(Poly::s_squared())).unwrap().is_zero());
}

#[test]
fn flat_p_prime_of_log_green() {
    let st = flat();
    let log_g = LogExpr::atom(LogAtom::log_two_pi()).negated().minus(&LogExpr::log_s());
    let pp = st.p_prime(&log_g).unwrap();
    let expect = zeta().square().recip().unwrap().re().scaled(&GaussRational::from_int(16));
    assert!(pp.minus(&expect).is_zero());
    // P′ on the flat model is 4Δ̊_b² composed in either order
    let f = v(Var::U);
    let lap = st.sublaplacian(&f).unwrap();
    let direct = st.sublaplacian(&lap).unwrap().scaled(&GaussRational::from_int(4));
    assert!(st.p_prime(&f).unwrap().minus(&direct).is_zero());
    assert!(st.p_prime(&LogExpr::one()).unwrap().is_zero());
}

#[test]
fn flat_paneitz_conventions_agree() {
    let st = flat();
    let f = LogExpr::from_poly(Poly::from_terms([
        ([2, 1, 1], GaussRational::from_parts(1, 1, 2, 3)),
        ([1, 2, 1], GaussRational::from_parts(1, 1, -2, 3)),
        ([0, 0, 3], GaussRational::from_int(5)),
        ([3, 3, 0], GaussRational::from_int(-2)),
    ]));
    let a = st.paneitz(&f, PaneitzConvention::Intro).unwrap();
    let b = st.paneitz(&f, PaneitzConvention::Body).unwrap();
    assert!(a.minus(&b).is_zero());
    assert!(b.is_real());
    assert!(st.paneitz(&LogExpr::one(), PaneitzConvention::Body).unwrap().is_zero());
}

#[test]
fn torsion_law_matches_resolve() {
    let st = flat();
    for f in [
        one_plus_zzb(),
        rat(&Poly::one() + &Poly::var(Var::U).pow(2)),
        rat(&(&Poly::from_int(2) + &Poly::var(Var::Z)) + &Poly::var(Var::Zb)),
    ] {
        let factor = ConformalFactor::log_of(&f).unwrap();
        let law = torsion_transform(&st, &factor).unwrap();
        let hat = conformal_change(&st, &factor).unwrap();
        assert!(law.minus(&hat.torsion_lower()).is_zero(), "torsion law for {f}");
    }
}

#[test]
fn equality_case_conformal_change() {
    let st = flat();
    let log_g = LogExpr::atom(LogAtom::log_two_pi()).negated().minus(&LogExpr::log_s());
    let factor = ConformalFactor::from_upsilon(&log_g.scaled(&GaussRational::from_int(2))).unwrap();
    let hat = conformal_change(&st, &factor).unwrap();
    assert!(hat.torsion.is_zero());
    assert!(hat.r.is_zero());
    assert!(torsion_transform(&st, &factor).unwrap().is_zero());
    hat.check().unwrap();
}

#[test]
fn conformal_identity_is_noop() {
    let st = flat();
    let hat = conformal_change(&st, &ConformalFactor::identity()).unwrap();
    assert!(hat.g.minus(&st.g).is_zero() && hat.r.is_zero() && hat.torsion.is_zero());
    let rhs = qprime_conformal_rhs(&st, &ConformalFactor::identity()).unwrap();
    assert!(rhs.is_zero());
}

#[test]
fn qprime_law_on_flat_battery() {
    let st = flat();
    for f in [
        one_plus_zzb(),
        rat(&Poly::one() + &Poly::var(Var::U).pow(2)),
        rat(&(&Poly::from_int(2) + &Poly::var(Var::Z)) + &Poly::var(Var::Zb)),
    ] {
        let factor = ConformalFactor::log_of(&f).unwrap();
        let lhs = qprime_conformal_lhs(&st, &factor).unwrap();
        let rhs = qprime_conformal_rhs(&st, &factor).unwrap();
        assert!(lhs.minus(&rhs).is_zero(), "Q′ law for {f}: lhs {lhs}\nrhs {rhs}");
    }
}

#[test]
fn factor_consistency_is_enforced() {
    let bad = ConformalFactor::new(LogExpr::log_s(), LogExpr::s().square());
    assert_eq!(bad.unwrap_err(), StructureError::InconsistentFactor);
    assert!(ConformalFactor::from_upsilon(&LogExpr::log_s().scaled(&GaussRational::ratio(1, 2))).is_err());
}

#[test]
fn pseudo_einstein_tensor_flat_and_curved() {
    let st = flat();
    assert!(st.pseudo_einstein_tensor().unwrap().is_zero());
    let hat = conformal_change(&st, &ConformalFactor::log_of(&one_plus_zzb()).unwrap()).unwrap();
    assert_eq!(qprime_conformal_rhs(&hat, &ConformalFactor::identity()).unwrap_err(), StructureError::NotPseudoEinstein);
}
