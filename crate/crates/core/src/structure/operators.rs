//! Named operator dispatch with convention tags for reports.

use std::fmt;

use super::{PseudohermitianStructure, StructureError};
use crate::symbolic::Scalar;

/// Which display of the Paneitz operator to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PaneitzConvention {
    /// `Δ_b²f + T²f − 4 Im ∇¹(A₁^{1̄} f_{,1̄})`.
    Intro,
    /// `4 ∇¹(P₃f)₁`.
    Body,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Operator {
    Sublaplacian,
    CrLaplacian,
    P3,
    Paneitz(PaneitzConvention),
    PPrime,
}

impl Operator {
    pub fn name(&self) -> &'static str {
        match self {
            Operator::Sublaplacian => "sublaplacian",
            Operator::CrLaplacian => "cr_laplacian",
            Operator::P3 => "p3",
            Operator::Paneitz(PaneitzConvention::Intro) => "paneitz_intro",
            Operator::Paneitz(PaneitzConvention::Body) => "paneitz_body",
            Operator::PPrime => "p_prime",
        }
    }

    pub fn convention(&self) -> &'static str {
        match self {
            Operator::Sublaplacian => "g^{11b}(f_{,11b} + f_{,1b1})",
            Operator::CrLaplacian => "-4 Δ_b f + R f",
            Operator::P3 => "Z_1(g^{11b} f_{,1b1}) + i A_{11} g^{11b} f_{,1b}",
            Operator::Paneitz(PaneitzConvention::Intro) => "Δ_b² f + T² f - 4 Im ∇^1(A_1^{1b} f_{,1b})",
            Operator::Paneitz(PaneitzConvention::Body) => "4 ∇^1 (P_3 f)_1",
            Operator::PPrime => "4Δ_b² f - 8 Im ∇^1(A_1^{1b} f_{,1b}) - 4 Re ∇^1(R f_{,1})",
        }
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug)]
pub struct OperatorResult<S: Scalar> {
    pub value: S,
    pub operator: Operator,
    pub convention: &'static str,
}

impl<S: Scalar> PseudohermitianStructure<S> {
    pub fn apply(&self, op: Operator, f: &S) -> Result<OperatorResult<S>, StructureError> {
        let value = match op {
            Operator::Sublaplacian => self.sublaplacian(f)?,
            Operator::CrLaplacian => self.cr_laplacian(f)?,
            Operator::P3 => self.p3_operator(f)?,
            Operator::Paneitz(c) => self.paneitz(f, c)?,
            Operator::PPrime => self.p_prime(f)?,
        };
        Ok(OperatorResult { value, operator: op, convention: op.convention() })
    }
}
