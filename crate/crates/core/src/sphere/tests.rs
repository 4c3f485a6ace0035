use super::*;
use crate::report::Status;

#[test]
fn sphere_chart_closed_forms() {
    let chart = sphere_structure_in_chart().unwrap();
    assert!(chart.direct.torsion.is_zero());
    let r = chart.direct.r.as_rat().and_then(|r| r.as_constant()).unwrap();
    println!("R = {r}");
    assert!(chart.q_prime.minus(&chart.direct.r.square()).is_zero());
}

#[test]
fn compiled_green_function_matches_exact() {
    let g = LogExpr::s().recip().unwrap();
    assert!(matches!(ChartIntegrand::compile(&g, Singularity::None), Err(SphereError::UndeclaredPole(_))));
    let c = ChartIntegrand::compile(&g, Singularity::Origin { exponent: -2 }).unwrap();
    let pts = probe_points();
    assert!(pts.len() >= 10);
    assert!(c.probe_error(&pts).unwrap() < 1e-12);
    for p in &pts {
        assert_eq!(p.s.pow(2), &GaussRational::real(p.z.norm_sqr()).pow(2) + &p.u.pow(2));
    }
}

#[test]
fn total_q_prime_and_linearity() {
    let cfg = QuadratureConfig::default();
    let chart = sphere_structure_in_chart().unwrap();
    let one = total_q_prime_with(&chart, &cfg, 0.0, 1.0).unwrap();
    let two = total_q_prime_with(&chart, &cfg, 0.0, 2.0).unwrap();
    let target = 16.0 * std::f64::consts::PI.powi(2);
    assert!((one.value - target).abs() / target < 1e-6, "{one:?}");
    assert!((two.value - 2.0 * one.value).abs() < 1e-9 * target);
    assert!((one.doubled - one.value).abs() < one.error);
}

#[test]
fn sphere_checks_pass() {
    for c in all_checks(&QuadratureConfig::default()) {
        println!("{}", crate::report::VerificationReport::new("t", Default::default(), vec![c.clone()]).to_text());
        assert_ne!(c.status, Status::Fail, "{}: {:?}", c.id, c.residual);
    }
}

#[test]
fn off_pole_bump_integrates_to_zero() {
    let b = default_bumps().pop().unwrap();
    let r = delta_normalization(&b, &QuadratureConfig::default()).unwrap();
    assert!(r.constant.is_none());
    assert!(r.integral.doubled.abs() < 1e-5, "{r:?}");
}

#[test]
fn bump_may_not_cover_the_pole() {
    let b = BumpSpec {
        label: "bad".into(),
        profile: Profile { a: 1.0, m: 1 },
        support: Support::Ball { z0: GaussRational::ratio(1, 4), u0: GaussRational::zero(), r0: GaussRational::one() },
    };
    assert_eq!(delta_normalization(&b, &QuadratureConfig::default()).unwrap_err(), SphereError::SupportTouchesPole);
}
