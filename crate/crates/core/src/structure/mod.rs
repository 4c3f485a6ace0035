//! Pseudohermitian structure equations and the operators built on them.
//!
//! The solver keeps `Z₁ = ∂z + λ∂u` (or the frame dual to a supplied `θ¹`),
//! finds the Reeb field and dual coframe, then reads the Levi form, the
//! Tanaka–Webster connection, torsion and curvature off the structure
//! equations
//!
//! ```text
//! dθ  = i g θ¹ ∧ θ¹̄
//! dθ¹ = θ¹ ∧ ω₁¹ + A¹₁̄ θ ∧ θ¹̄
//! dg  = g (ω₁¹ + ω₁̄¹̄)
//! dω₁¹ = R g θ¹ ∧ θ¹̄   mod θ
//! ```

mod conformal;
mod operators;

use thiserror::Error;

use crate::exterior::{inverse3, reeb_field, AdaptedCoframe, DifferentialForm, FormError, VectorField};
use crate::symbolic::{GaussRational, Scalar, SymbolicError};

pub use conformal::{conformal_change, qprime_conformal_lhs, qprime_conformal_rhs, torsion_transform, ConformalFactor};
pub use operators::{Operator, OperatorResult, PaneitzConvention};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum StructureError {
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
    #[error("Levi form vanishes at the base point")]
    DegenerateLeviForm,
    #[error("θ¹ hint is not admissible: {0}")]
    HintNotAdmissible(String),
    #[error("θ has no ∂u component to solve for the CR frame")]
    NoGraphFrame,
    #[error("structure residual `{0}` does not vanish")]
    Residual(String),
    #[error("conformal factor is inconsistent: d(e^Υ) ≠ e^Υ dΥ")]
    InconsistentFactor,
    #[error("structure is not pseudo-Einstein")]
    NotPseudoEinstein,
    #[error("unsupported index pattern `{0}`")]
    UnsupportedPattern(String),
}

/// Frame index: `One` = `1`, `Bar` = `1̄`, `Zero` = the Reeb direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Idx {
    One,
    Bar,
    Zero,
}

impl Idx {
    pub fn conj(self) -> Idx {
        match self {
            Idx::One => Idx::Bar,
            Idx::Bar => Idx::One,
            Idx::Zero => Idx::Zero,
        }
    }

    /// Parses patterns like `"1"`, `"11b"`, `"1b10"`.
    pub fn parse_pattern(p: &str) -> Result<Vec<Idx>, StructureError> {
        let mut out = Vec::new();
        let chars: Vec<char> = p.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            match chars[i] {
                '1' => {
                    if chars.get(i + 1) == Some(&'b') {
                        out.push(Idx::Bar);
                        i += 1;
                    } else {
                        out.push(Idx::One);
                    }
                }
                '0' => out.push(Idx::Zero),
                _ => return Err(StructureError::UnsupportedPattern(p.to_string())),
            }
            i += 1;
        }
        if out.len() > 4 {
            return Err(StructureError::UnsupportedPattern(p.to_string()));
        }
        Ok(out)
    }
}

/// A tensor component with one value (the bundle is one-dimensional), its
/// lower and upper index types.
#[derive(Clone, Debug)]
pub struct Tensor<S: Scalar> {
    pub value: S,
    pub lower: Vec<Idx>,
    pub upper: Vec<Idx>,
}

impl<S: Scalar> Tensor<S> {
    pub fn scalar(value: S) -> Self {
        Tensor { value, lower: vec![], upper: vec![] }
    }

    pub fn new(value: S, lower: Vec<Idx>, upper: Vec<Idx>) -> Self {
        Tensor { value, lower, upper }
    }
}

/// Solved pseudohermitian structure.
#[derive(Clone, Debug)]
pub struct PseudohermitianStructure<S: Scalar> {
    pub theta: DifferentialForm<S>,
    pub reeb: VectorField<S>,
    pub theta1: DifferentialForm<S>,
    pub z1: VectorField<S>,
    pub z1bar: VectorField<S>,
    pub g: S,
    pub g_inv: S,
    /// `ω₁¹` as a coordinate 1-form.
    pub omega: DifferentialForm<S>,
    /// `ω₁¹(Z₁), ω₁¹(Z₁̄), ω₁¹(T)`.
    pub omega_frame: [S; 3],
    /// `A¹₁̄`.
    pub torsion: S,
    /// Webster scalar curvature.
    pub r: S,
    pub coframe: AdaptedCoframe<S>,
}

fn i_unit() -> GaussRational {
    GaussRational::i()
}

/// Solves the structure equations for `θ`. Without a hint the CR frame is
/// `Z₁ = ∂z + λ∂u` with `λ = −θ_z/θ_u`, i.e. the `(1,0)` part of `ker θ`.
/// A hint `θ¹` fixes `Z₁` as its dual vector and must annihilate the Reeb
/// field.
pub fn solve_structure<S: Scalar>(
    theta: &DifferentialForm<S>,
    theta1_hint: Option<&DifferentialForm<S>>,
) -> Result<PseudohermitianStructure<S>, StructureError> {
    let z1 = match theta1_hint {
        Some(h) => {
            let cf = AdaptedCoframe::new(theta.clone(), h.clone())?;
            let [_, z, _] = cf.dual_frame()?;
            let reeb = reeb_field(theta)?;
            if !h.eval(&[&reeb])?.is_zero() {
                return Err(StructureError::HintNotAdmissible("θ¹(T) ≠ 0".into()));
            }
            z
        }
        None => {
            let [tz, _, tu] = theta.one_form_coeffs()?;
            if tu.is_zero() {
                return Err(StructureError::NoGraphFrame);
            }
            VectorField::new(S::one(), S::zero(), tz.negated().checked_div(&tu)?)
        }
    };
    solve_with_frame(theta, &z1)
}

/// Solves the structure equations for `θ` with a prescribed `Z₁ ∈ ker θ`.
pub fn solve_with_frame<S: Scalar>(
    theta: &DifferentialForm<S>,
    z1: &VectorField<S>,
) -> Result<PseudohermitianStructure<S>, StructureError> {
    if !z1.pair(theta)?.is_zero() {
        return Err(StructureError::HintNotAdmissible("Z₁ is not in ker θ".into()));
    }
    let reeb = reeb_field(theta)?;
    let z1 = z1.clone();
    let z1bar = z1.conj();
    let m: [[S; 3]; 3] = std::array::from_fn(|row| {
        std::array::from_fn(|col| [&reeb, &z1, &z1bar][col].comps()[row].clone())
    });
    let inv = inverse3(&m)?;
    let th1 = DifferentialForm::one_form(inv[1][0].clone(), inv[1][1].clone(), inv[1][2].clone());
    let coframe = AdaptedCoframe::new(theta.clone(), th1)?;

    let dtheta = theta.d()?;
    let g = dtheta.eval(&[&z1, &z1bar])?.scaled(&-i_unit());
    if g.is_zero() {
        return Err(StructureError::DegenerateLeviForm);
    }
    let g_inv = g.recip().map_err(|_| StructureError::DegenerateLeviForm)?;

    let dtheta1 = coframe.theta1.d()?;
    let c1 = dtheta1.eval(&[&reeb, &z1])?;
    let c2 = dtheta1.eval(&[&reeb, &z1bar])?;
    let c3 = dtheta1.eval(&[&z1, &z1bar])?;
    let beta = c3;
    let gamma = c1.negated();
    let torsion = c2;
    let alpha = z1.apply(&g)?.times(&g_inv).minus(&beta.conj());

    let omega = coframe
        .theta1
        .scale(&alpha)
        .plus(&coframe.theta1bar.scale(&beta))?
        .plus(&theta.scale(&gamma))?;
    let r = omega.d()?.eval(&[&z1, &z1bar])?.times(&g_inv);

    Ok(PseudohermitianStructure {
        theta: theta.clone(),
        reeb,
        theta1: coframe.theta1.clone(),
        z1,
        z1bar,
        g,
        g_inv,
        omega,
        omega_frame: [alpha, beta, gamma],
        torsion,
        r,
        coframe,
    })
}

impl<S: Scalar> PseudohermitianStructure<S> {
    /// The frame vector for an index.
    pub fn frame(&self, i: Idx) -> &VectorField<S> {
        match i {
            Idx::One => &self.z1,
            Idx::Bar => &self.z1bar,
            Idx::Zero => &self.reeb,
        }
    }

    /// `ω₁¹(Z_i)`.
    pub fn omega_on(&self, i: Idx) -> S {
        match i {
            Idx::One => self.omega_frame[0].clone(),
            Idx::Bar => self.omega_frame[1].clone(),
            Idx::Zero => self.omega_frame[2].clone(),
        }
    }

    /// `ω₁̄¹̄(Z_i) = conj(ω₁¹(Z_ī))`.
    pub fn omega_bar_on(&self, i: Idx) -> S {
        self.omega_on(i.conj()).conj()
    }

    /// Connection coefficient acting on a tensor index of type `slot` when
    /// differentiating in direction `dir`.
    fn connection(&self, slot: Idx, dir: Idx) -> S {
        match slot {
            Idx::One => self.omega_on(dir),
            Idx::Bar => self.omega_bar_on(dir),
            Idx::Zero => S::zero(),
        }
    }

    /// One covariant derivative in direction `dir`, appended as a lower index.
    pub fn derive(&self, t: &Tensor<S>, dir: Idx) -> Result<Tensor<S>, StructureError> {
        let mut v = self.frame(dir).apply(&t.value)?;
        for slot in &t.lower {
            v = v.minus(&self.connection(*slot, dir).times(&t.value));
        }
        for slot in &t.upper {
            v = v.plus(&self.connection(*slot, dir).times(&t.value));
        }
        let mut lower = t.lower.clone();
        lower.push(dir);
        Ok(Tensor { value: v, lower, upper: t.upper.clone() })
    }

    /// `f_{,p₁p₂…}` for a scalar `f`.
    pub fn covariant_derivative(&self, f: &S, pattern: &[Idx]) -> Result<S, StructureError> {
        if pattern.len() > 4 {
            return Err(StructureError::UnsupportedPattern(format!("{pattern:?}")));
        }
        let mut t = Tensor::scalar(f.clone());
        for &p in pattern {
            t = self.derive(&t, p)?;
        }
        Ok(t.value)
    }

    /// `A₁₁ = g · conj(A¹₁̄)`.
    pub fn torsion_lower(&self) -> S {
        self.g.times(&self.torsion.conj())
    }

    /// `A₁^{1̄} = conj(A¹₁̄)`.
    pub fn torsion_mixed(&self) -> S {
        self.torsion.conj()
    }

    /// `|A₁₁|²` with both indices raised by the Levi form.
    pub fn torsion_norm_sqr(&self) -> S {
        self.torsion.times(&self.torsion.conj())
    }

    /// Names and values of the structure-equation residuals; all must vanish.
    pub fn residuals(&self) -> Result<Vec<(&'static str, DifferentialForm<S>)>, StructureError> {
        let th = &self.theta;
        let t1 = &self.coframe.theta1;
        let t1b = &self.coframe.theta1bar;
        let i = S::constant(i_unit());
        let levi = t1.wedge(t1b)?;
        let r1 = th.d()?.minus(&levi.scale(&i.times(&self.g)))?;
        let r2 = t1
            .d()?
            .minus(&t1.wedge(&self.omega)?)?
            .minus(&th.wedge(t1b)?.scale(&self.torsion))?;
        let dg = DifferentialForm::scalar(self.g.clone()).d()?;
        let r3 = dg.minus(&self.omega.plus(&self.omega.conj())?.scale(&self.g))?;
        // only the θ¹∧θ¹̄ part of dω − R g θ¹∧θ¹̄ is constrained
        let rem = self.omega.d()?.minus(&levi.scale(&self.r.times(&self.g)))?;
        let comps = self.coframe.expand(&rem)?;
        let r4 = levi.scale(&comps.get(&[1, 2]));
        Ok(vec![("levi", r1), ("torsion", r2), ("metric", r3), ("curvature", r4)])
    }

    /// Errors on the first non-vanishing residual.
    pub fn check(&self) -> Result<(), StructureError> {
        for (name, f) in self.residuals()? {
            if !f.is_zero() {
                return Err(StructureError::Residual(name.to_string()));
            }
        }
        Ok(())
    }

    /// `Δ_b f = g^{11̄}(f_{,11̄} + f_{,1̄1})`.
    pub fn sublaplacian(&self, f: &S) -> Result<S, StructureError> {
        let a = self.covariant_derivative(f, &[Idx::One, Idx::Bar])?;
        let b = self.covariant_derivative(f, &[Idx::Bar, Idx::One])?;
        Ok(a.plus(&b).times(&self.g_inv))
    }

    /// `L f = −4Δ_b f + R f`.
    pub fn cr_laplacian(&self, f: &S) -> Result<S, StructureError> {
        Ok(self.sublaplacian(f)?.scaled(&GaussRational::from_int(-4)).plus(&self.r.times(f)))
    }

    /// `(P₃ f)₁ = ∇₁(f_{,1̄}{}^{1̄}) + i A₁₁ f^{1}`, with `f^1 = g^{11̄} f_{,1̄}`.
    pub fn p3_operator(&self, f: &S) -> Result<S, StructureError> {
        let f1b1 = self.covariant_derivative(f, &[Idx::Bar, Idx::One])?;
        let trace = f1b1.times(&self.g_inv);
        let main = self.z1.apply(&trace)?;
        let f1b = self.z1bar.apply(f)?;
        let tors = self.torsion_lower().times(&self.g_inv).times(&f1b).scaled(&i_unit());
        Ok(main.plus(&tors))
    }

    /// `∇¹X₁ = g^{11̄} X_{1,1̄}` for a lower-`1` tensor component `x`.
    pub fn divergence(&self, x: &S) -> Result<S, StructureError> {
        let t = Tensor::new(x.clone(), vec![Idx::One], vec![]);
        Ok(self.derive(&t, Idx::Bar)?.value.times(&self.g_inv))
    }

    /// `∇¹(A₁^{1̄} f_{,1̄})`.
    fn torsion_divergence(&self, f: &S) -> Result<S, StructureError> {
        let f1b = self.z1bar.apply(f)?;
        self.divergence(&self.torsion_mixed().times(&f1b))
    }

    pub fn paneitz(&self, f: &S, convention: PaneitzConvention) -> Result<S, StructureError> {
        match convention {
            PaneitzConvention::Body => {
                let p3 = self.p3_operator(f)?;
                Ok(self.divergence(&p3)?.scaled(&GaussRational::from_int(4)))
            }
            PaneitzConvention::Intro => {
                let lap = self.sublaplacian(f)?;
                let lap2 = self.sublaplacian(&lap)?;
                let tt = self.reeb.apply(&self.reeb.apply(f)?)?;
                let im = self.torsion_divergence(f)?.im();
                Ok(lap2.plus(&tt).minus(&im.scaled(&GaussRational::from_int(4))))
            }
        }
    }

    /// `P′f = 4Δ_b²f − 8 Im ∇¹(A₁^{1̄} f_{,1̄}) − 4 Re ∇¹(R f_{,1})`.
    pub fn p_prime(&self, f: &S) -> Result<S, StructureError> {
        let lap2 = self.sublaplacian(&self.sublaplacian(f)?)?;
        let tors = self.torsion_divergence(f)?.im();
        let f1 = self.z1.apply(f)?;
        let curv = self.divergence(&self.r.times(&f1))?.re();
        Ok(lap2
            .scaled(&GaussRational::from_int(4))
            .minus(&tors.scaled(&GaussRational::from_int(8)))
            .minus(&curv.scaled(&GaussRational::from_int(4))))
    }

    /// `Q′ = −2Δ_b R + R² − 4|A₁₁|²`.
    pub fn q_prime(&self) -> Result<S, StructureError> {
        Ok(self
            .sublaplacian(&self.r)?
            .scaled(&GaussRational::from_int(-2))
            .plus(&self.r.square())
            .minus(&self.torsion_norm_sqr().scaled(&GaussRational::from_int(4))))
    }

    /// `R_{,1} − i A^{1̄}_{1,1̄}`.
    pub fn pseudo_einstein_tensor(&self) -> Result<S, StructureError> {
        let r1 = self.z1.apply(&self.r)?;
        let a = Tensor::new(self.torsion_mixed(), vec![Idx::One], vec![Idx::Bar]);
        let div = self.derive(&a, Idx::Bar)?.value;
        Ok(r1.minus(&div.scaled(&i_unit())))
    }

    pub fn is_pseudo_einstein(&self) -> Result<bool, StructureError> {
        Ok(self.pseudo_einstein_tensor()?.is_zero())
    }
}

#[cfg(test)]
mod tests;
