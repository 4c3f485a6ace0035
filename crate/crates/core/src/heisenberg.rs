//! Exact identities on the Heisenberg group: the Green's function
//! `G̊ = 1/(2πρ²)` of `L̊`, the log-Green identities, `P̊₃(log ρ) = 0`, the
//! kernel `P̊′(log G̊)` and the flat reduction of the `Q′` law.
//!
//! The constant `2π` is not rational: `G̊` is carried as `1/s` with the
//! factor `1/(2π)` kept aside, and `log G̊ = −log 2π − log s` uses an opaque
//! constant atom for `log 2π`.

use crate::exterior::DifferentialForm;
use crate::report::{Check, Provenance};
use crate::structure::{
    conformal_change, solve_structure, torsion_transform, ConformalFactor, PaneitzConvention, PseudohermitianStructure,
    StructureError,
};
use crate::symbolic::{GaussRational, LogAtom, LogExpr, Scalar, Var};

pub struct FlatModel {
    pub structure: PseudohermitianStructure<LogExpr>,
    /// `2π·G̊ = 1/s`.
    pub green_scaled: LogExpr,
    pub log_green: LogExpr,
}

fn c(re_n: i64, re_d: i64, im_n: i64, im_d: i64) -> LogExpr {
    LogExpr::constant(GaussRational::from_parts(re_n, re_d, im_n, im_d))
}

/// `θ̊ = ½(du − i z̄ dz + i z dz̄)`.
pub fn flat_contact_form() -> DifferentialForm<LogExpr> {
    DifferentialForm::one_form(
        LogExpr::var(Var::Zb).times(&c(0, 1, -1, 2)),
        LogExpr::var(Var::Z).times(&c(0, 1, 1, 2)),
        c(1, 2, 0, 1),
    )
}

pub fn flat_model() -> Result<FlatModel, StructureError> {
    let structure = solve_structure(&flat_contact_form(), None)?;
    Ok(FlatModel {
        structure,
        green_scaled: LogExpr::s().recip()?,
        log_green: log_green_with_power(1),
    })
}

impl FlatModel {
    /// Replaces `G̊` by `1/(2π sᵏ)`; `k = 1` is the Green's function.
    pub fn with_green_power(mut self, k: u32) -> Result<Self, StructureError> {
        let inv = LogExpr::s().recip()?;
        self.green_scaled = (1..k).fold(inv.clone(), |acc, _| acc.times(&inv));
        self.log_green = log_green_with_power(k as i64);
        Ok(self)
    }
}

/// `log(1/(2π sᵏ)) = −log 2π − k log s`.
fn log_green_with_power(k: i64) -> LogExpr {
    LogExpr::atom(LogAtom::log_two_pi()).negated().minus(&LogExpr::log_s().scaled(&GaussRational::from_int(k)))
}

fn int(n: i64) -> GaussRational {
    GaussRational::from_int(n)
}

fn zeta() -> LogExpr {
    LogExpr::zeta()
}

fn run(id: &str, provenance: Provenance, anchor: &str, body: impl FnOnce(&mut Check) -> Result<(), StructureError>) -> Check {
    let mut check = Check::new(id, provenance, anchor);
    match body(&mut check) {
        Ok(()) => check,
        Err(e) => Check::failed(id, provenance, anchor, e),
    }
}

fn zero_check(check: &mut Check, label: &str, value: &LogExpr) {
    check.expect(label, value, value.is_zero());
}

/// `L̊ G̊ = 0` away from the pole, with `L̊(log s) ≠ 0` as negative control.
pub fn green_harmonicity(fm: &FlatModel) -> Check {
    run("heisenberg.green_harmonicity", Provenance::Derived, "L̊ G̊ = −4Δ̊_b G̊ = 0 off the pole", |ch| {
        let st = &fm.structure;
        zero_check(ch, "L̊(2πG̊)", &st.cr_laplacian(&fm.green_scaled)?);
        zero_check(ch, "L̊(7)", &st.cr_laplacian(&LogExpr::from_int(7))?);
        // L̊(log s) = −8|z|²/s²
        let got = st.cr_laplacian(&LogExpr::log_s())?;
        let expect = LogExpr::var(Var::Z)
            .times(&LogExpr::var(Var::Zb))
            .scaled(&int(-8))
            .checked_div(&LogExpr::s().square())?;
        ch.expect("L̊(log s) = −8|z|²/ρ⁴", &got, got.minus(&expect).is_zero() && !got.is_zero());
        Ok(())
    })
}

/// `Z̊₁Z̊₁Z̊₁̄ f` by direct composition of the frame.
fn z1z1z1bar(st: &PseudohermitianStructure<LogExpr>, f: &LogExpr) -> Result<LogExpr, StructureError> {
    let a = st.z1bar.apply(f)?;
    let b = st.z1.apply(&a)?;
    Ok(st.z1.apply(&b)?)
}

pub fn p3_log_rho(fm: &FlatModel) -> Check {
    run("heisenberg.p3_log_rho", Provenance::Printed, "P̊₃(log ρ) = 0", |ch| {
        let st = &fm.structure;
        for (label, f) in [("log ρ", LogExpr::log_rho()), ("Re log ζ", LogExpr::log_zeta().re())] {
            zero_check(ch, &format!("P̊₃({label})"), &st.p3_operator(&f)?);
            zero_check(ch, &format!("Z̊₁Z̊₁Z̊₁̄({label})"), &z1z1z1bar(st, &f)?);
        }
        ch.note("P̊₃(Im log ζ)", st.p3_operator(&LogExpr::log_zeta().im())?);
        Ok(())
    })
}

/// The log-Green identities `Z̊₁Z̊₁ log G̊ = 2(Z̊₁ log G̊)²` and
/// `Z̊₁Z̊₁ log ρ⁴ = −(Z̊₁ log ρ⁴)²`, with the CR function `ζ`.
pub fn green_log_identity(fm: &FlatModel) -> Check {
    run("heisenberg.green_log_identity", Provenance::Printed, "Z̊₁Z̊₁ log(1/2πρ²) − 2(Z̊₁ log(1/2πρ²))² = 0", |ch| {
        let st = &fm.structure;
        let z1 = |f: &LogExpr| st.z1.apply(f);
        zero_check(ch, "Z̊₁̄ζ", &st.z1bar.apply(&zeta())?);
        let log_rho4 = LogExpr::log_s().scaled(&int(2));
        let d1 = z1(&log_rho4)?;
        let expect = LogExpr::var(Var::Zb).scaled(&int(2)).checked_div(&zeta())?;
        zero_check(ch, "Z̊₁ log ρ⁴ − 2z̄/ζ", &d1.minus(&expect));
        zero_check(ch, "Z̊₁Z̊₁ log ρ⁴ + (Z̊₁ log ρ⁴)²", &z1(&d1)?.plus(&d1.square()));
        let identity = |log_g: &LogExpr| -> Result<LogExpr, StructureError> {
            let d = z1(log_g)?;
            Ok(z1(&d)?.minus(&d.square().scaled(&int(2))))
        };
        zero_check(ch, "Z̊₁Z̊₁ log G̊ − 2(Z̊₁ log G̊)²", &identity(&fm.log_green)?);
        // wrong power 1/(2πs²) must fail
        let wrong = identity(&log_green_with_power(2))?;
        ch.expect("wrong power 1/(2πρ⁴) gives nonzero", &wrong, !wrong.is_zero());
        Ok(())
    })
}

/// `θ̂ = G̊²θ̊` is torsion-free and scalar-flat away from the pole.
pub fn flat_torsion_of_hat(fm: &FlatModel) -> Check {
    run("heisenberg.flat_torsion_of_hat", Provenance::Printed, "Â₁₁ ≡ 0 and R̂ = 0 for θ̂ = G̊²θ̊", |ch| {
        let st = &fm.structure;
        let factor = ConformalFactor::from_upsilon(&fm.log_green.scaled(&int(2)))?;
        zero_check(ch, "Â by the transformation law", &torsion_transform(st, &factor)?);
        let hat = conformal_change(st, &factor)?;
        zero_check(ch, "Â by re-solving", &hat.torsion);
        zero_check(ch, "R̂ by re-solving", &hat.r);
        let q = hat.q_prime()?;
        zero_check(ch, "Q̂′ + 4|Â|²", &q.plus(&hat.torsion_norm_sqr().scaled(&int(4))));
        zero_check(ch, "Q̂′", &q);
        hat.check()?;
        Ok(())
    })
}

/// `P̊′(log G̊)` in closed form.
pub fn szego_candidate(fm: &FlatModel) -> Result<LogExpr, StructureError> {
    fm.structure.p_prime(&fm.log_green)
}

/// `16 Re(ζ⁻²)`.
pub fn szego_expected() -> Result<LogExpr, StructureError> {
    Ok(zeta().square().recip()?.re().scaled(&int(16)))
}

pub fn szego_check(fm: &FlatModel) -> Check {
    run("heisenberg.szego_candidate", Provenance::Derived, "P̊′(log G̊) = 16 Re(ζ⁻²) = 8π² S_p", |ch| {
        let k = szego_candidate(fm)?;
        ch.note("P̊′(log G̊)", &k);
        zero_check(ch, "P̊′(log G̊) − 16Re(ζ⁻²)", &k.minus(&szego_expected()?));
        ch.expect("real", "", k.is_real());
        zero_check(ch, "P̊₃(P̊′(log G̊))", &fm.structure.p3_operator(&k)?);
        // weighted degree −4 under (z, u) ↦ (tz, t²u)
        let t = int(3);
        let scaled = k.dilate(&t)?;
        zero_check(ch, "k(3z, 9u) − 3⁻⁴k", &scaled.minus(&k.scaled(&t.pow(4).inv()?)));
        Ok(())
    })
}

/// The implied `S_p = P̊′(log G̊)/(8π²)`; nothing to assert it against.
pub fn szego_normalization(fm: &FlatModel) -> Check {
    let body = |ch: &mut Check| -> Result<(), StructureError> {
        let k = szego_candidate(fm)?;
        ch.note("S_p candidate", format!("(1/(8π²))·({k}) = (2/π²)·Re(ζ⁻²)"));
        Ok(())
    };
    run("heisenberg.szego_normalization", Provenance::Derived, "P̊′(log G̊) = 8π² S_p", body).recorded()
}

/// The flat reduction of the `Q′` law with `Υ = 2 log G̊`: every term is
/// computed and the sum must vanish.
pub fn flat_qprime_law(fm: &FlatModel) -> Check {
    run(
        "heisenberg.flat_qprime_law",
        Provenance::Derived,
        "−4G⁴|Â|² = Q′ + 2P′(log G) + 2P((log G)²) − 4(log G)P(log G) − 64Re(∇¹log G)(P₃ log G)₁",
        |ch| {
            let st = &fm.structure;
            let lg = &fm.log_green;
            let factor = ConformalFactor::from_upsilon(&lg.scaled(&int(2)))?;
            let hat = conformal_change(st, &factor)?;
            let p = |f: &LogExpr| st.paneitz(f, PaneitzConvention::Body);
            let lhs = hat.torsion_norm_sqr().scaled(&int(-4));
            let q = st.q_prime()?;
            let p3 = st.p3_operator(lg)?;
            let t1 = st.p_prime(lg)?.scaled(&int(2));
            let t2 = p(&lg.square())?.scaled(&int(2));
            let t3 = lg.times(&p(lg)?).scaled(&int(-4));
            let grad = st.z1bar.apply(lg)?.times(&st.g_inv);
            let t4 = grad.times(&p3).re().scaled(&int(-64));
            for (label, v) in [("LHS", &lhs), ("Q′", &q), ("P₃(log G)", &p3)] {
                zero_check(ch, label, v);
            }
            ch.note("2P′(log G)", &t1).note("2P((log G)²)", &t2).note("−4(log G)P(log G)", &t3).note("−64Re(...)", &t4);
            let rhs = q.plus(&t1).plus(&t2).plus(&t3).plus(&t4);
            zero_check(ch, "RHS − LHS", &rhs.minus(&lhs));
            zero_check(ch, "P′(log G) + P((log G)²)", &st.p_prime(lg)?.plus(&p(&lg.square())?));
            Ok(())
        },
    )
}

pub fn all_checks() -> Vec<Check> {
    checks_for(flat_model())
}

/// The suite on a given flat model, e.g. one with a wrong Green power.
pub fn checks_for(fm: Result<FlatModel, StructureError>) -> Vec<Check> {
    match fm {
        Ok(fm) => vec![
            green_harmonicity(&fm),
            p3_log_rho(&fm),
            green_log_identity(&fm),
            flat_torsion_of_hat(&fm),
            szego_check(&fm),
            szego_normalization(&fm),
            flat_qprime_law(&fm),
        ],
        Err(e) => vec![Check::failed("heisenberg.flat_model", Provenance::Trivial, "flat structure", e)],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Status;

    #[test]
    fn flat_model_invariants() {
        let fm = flat_model().unwrap();
        let st = &fm.structure;
        assert!(st.r.is_zero() && st.torsion.is_zero() && st.omega.is_zero());
        assert!(st.g.minus(&LogExpr::one()).is_zero());
        assert!(fm.green_scaled.times(&LogExpr::s()).minus(&LogExpr::one()).is_zero());
    }

    #[test]
    fn every_flat_check_passes() {
        for c in all_checks() {
            assert_ne!(c.status, Status::Fail, "{}: {:?}", c.id, c.residual);
        }
    }

    #[test]
    fn szego_candidate_closed_form() {
        let fm = flat_model().unwrap();
        assert!(szego_candidate(&fm).unwrap().minus(&szego_expected().unwrap()).is_zero());
        assert_eq!(szego_normalization(&fm).status, Status::Recorded);
    }

    #[test]
    fn direct_composition_matches_p3_on_flat() {
        let fm = flat_model().unwrap();
        let f = LogExpr::log_zeta().im();
        let a = fm.structure.p3_operator(&f).unwrap();
        let b = z1z1z1bar(&fm.structure, &f).unwrap();
        assert!(a.minus(&b).is_zero());
    }
}
