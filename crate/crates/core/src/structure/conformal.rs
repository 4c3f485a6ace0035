//! Conformal change `θ̂ = e^Υ θ` by full re-solve, and the transformation
//! laws it is checked against.

use num_traits::{One, ToPrimitive};

use super::{solve_with_frame, Idx, PaneitzConvention, PseudohermitianStructure, StructureError};
use crate::symbolic::{GaussRational, GradedSeries, LogAtom, LogExpr, RatFn, Scalar, Var};

/// `Υ` together with a multiplier `m` satisfying `e^Υ = c·m` for a positive
/// constant `c`. The constant is irrelevant to every law checked here
/// (it rescales `θ̂` and is compensated by the `e^{2Υ}` weight), so only
/// `dm = m dΥ` is enforced.
#[derive(Clone, Debug)]
pub struct ConformalFactor<S: Scalar> {
    pub upsilon: S,
    pub multiplier: S,
}

impl<S: Scalar> ConformalFactor<S> {
    pub fn new(upsilon: S, multiplier: S) -> Result<Self, StructureError> {
        for v in Var::ALL {
            let lhs = multiplier.diff(v)?;
            let rhs = multiplier.times(&upsilon.diff(v)?);
            if !lhs.minus(&rhs).is_zero() {
                return Err(StructureError::InconsistentFactor);
            }
        }
        Ok(ConformalFactor { upsilon, multiplier })
    }

    pub fn identity() -> Self {
        ConformalFactor { upsilon: S::zero(), multiplier: S::one() }
    }
}

impl ConformalFactor<LogExpr> {
    /// `Υ = log f` for a positive rational function `f`.
    pub fn log_of(f: &RatFn) -> Result<Self, StructureError> {
        let upsilon = LogExpr::log_rat(f)?;
        ConformalFactor::new(upsilon, LogExpr::from_rat(f.clone()))
    }

    /// Recovers the multiplier from `Υ = Σ kⱼ log pⱼ + (constant logs)` with
    /// integer `kⱼ`.
    pub fn from_upsilon(upsilon: &LogExpr) -> Result<Self, StructureError> {
        let non_rep = || {
            StructureError::Symbolic(crate::symbolic::SymbolicError::NonRepresentable(format!(
                "e^({upsilon}) is not a rational function"
            )))
        };
        let mut m = RatFn::one();
        for (mono, coeff) in upsilon.terms() {
            let c = coeff.as_constant().ok_or_else(non_rep)?;
            if mono.is_empty() {
                // e^c is rational only for c = 0, and zero terms are never stored
                return Err(non_rep());
            }
            if mono.len() != 1 || !c.is_real() || !c.re.denom().is_one() {
                return Err(non_rep());
            }
            let (atom, pow) = mono.iter().next().expect("one atom");
            if *pow != 1 {
                return Err(non_rep());
            }
            let k = c.re.numer().to_i64().ok_or_else(non_rep)?;
            match atom {
                LogAtom::Const { .. } => {}
                LogAtom::Log(p) => {
                    let base = RatFn::from_poly(p.clone());
                    let f = if k >= 0 { base.pow(k as u32) } else { base.pow((-k) as u32).inv()? };
                    m = m.mul(&f);
                }
            }
        }
        ConformalFactor::new(upsilon.clone(), LogExpr::from_rat(m))
    }
}

impl ConformalFactor<GradedSeries> {
    /// `e^Υ` expanded as a series; `Υ` must vanish at the origin.
    pub fn graded(upsilon: GradedSeries) -> Result<Self, StructureError> {
        let multiplier = upsilon.exp()?;
        Ok(ConformalFactor { upsilon, multiplier })
    }
}

/// Re-solves the structure equations for `e^Υ θ`, keeping the CR frame `Z₁`.
pub fn conformal_change<S: Scalar>(
    st: &PseudohermitianStructure<S>,
    factor: &ConformalFactor<S>,
) -> Result<PseudohermitianStructure<S>, StructureError> {
    let theta = st.theta.scale(&factor.multiplier);
    solve_with_frame(&theta, &st.z1)
}

/// Torsion of `θ̂ = G²θ`, `G = e^{Υ/2}`, from the transformation law
/// `Â₁₁ = A₁₁ + 2i(log G)_{,11} − 4i(log G)_{,1}(log G)_{,1}`.
///
/// The value is the component on `Z₁ ⊗ Z₁` lowered with `ĝ`, i.e. the frame
/// the solver keeps. In the frame normalised so that the Levi form is
/// unchanged it picks up the factor `G⁻²`.
pub fn torsion_transform<S: Scalar>(
    st: &PseudohermitianStructure<S>,
    factor: &ConformalFactor<S>,
) -> Result<S, StructureError> {
    let f = factor.upsilon.scaled(&GaussRational::ratio(1, 2));
    let f11 = st.covariant_derivative(&f, &[Idx::One, Idx::One])?;
    let f1 = st.z1.apply(&f)?;
    let i = GaussRational::i();
    Ok(st
        .torsion_lower()
        .plus(&f11.scaled(&(i.clone() * GaussRational::from_int(2))))
        .minus(&f1.square().scaled(&(i * GaussRational::from_int(4)))))
}

/// `e^{2Υ} Q̂′`, computed from a full re-solve (the constant in `e^Υ = c·m`
/// cancels).
pub fn qprime_conformal_lhs<S: Scalar>(
    st: &PseudohermitianStructure<S>,
    factor: &ConformalFactor<S>,
) -> Result<S, StructureError> {
    let hat = conformal_change(st, factor)?;
    Ok(factor.multiplier.square().times(&hat.q_prime()?))
}

/// `Q′ + P′(Υ) + ½P(Υ²) − ΥP(Υ) − 16 Re((∇¹Υ)(P₃Υ)₁)` with the divergence
/// form of `P`. Requires a pseudo-Einstein background.
pub fn qprime_conformal_rhs<S: Scalar>(
    st: &PseudohermitianStructure<S>,
    factor: &ConformalFactor<S>,
) -> Result<S, StructureError> {
    if !st.is_pseudo_einstein()? {
        return Err(StructureError::NotPseudoEinstein);
    }
    let y = &factor.upsilon;
    let body = PaneitzConvention::Body;
    let q = st.q_prime()?;
    let pp = st.p_prime(y)?;
    let p_sq = st.paneitz(&y.square(), body)?;
    let p_y = st.paneitz(y, body)?;
    let grad_up = st.z1bar.apply(y)?.times(&st.g_inv);
    let cross = grad_up.times(&st.p3_operator(y)?).re();
    Ok(q.plus(&pp)
        .plus(&p_sq.scaled(&GaussRational::ratio(1, 2)))
        .minus(&y.times(&p_y))
        .minus(&cross.scaled(&GaussRational::from_int(16))))
}
