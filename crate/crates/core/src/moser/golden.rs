//! Printed Moser expansions as literal term lists.
//!
//! A term is `coeff · z^a z̄^b u^c · ∂^d E`, or just the monomial when `e` is
//! absent.

use serde::{Deserialize, Serialize};

use super::{MoserData, MoserError};
use crate::symbolic::{GaussRational, GradedSeries, Poly};

pub const DEFAULT_GOLDEN: &str = include_str!("../../data/moser_golden.json");

const SCHEMA: &str = "crprime-moser-golden/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenTerm {
    pub coeff: String,
    pub mono: [u32; 3],
    pub e: Option<[u32; 3]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenExpansion {
    pub id: String,
    pub display: String,
    pub error_order: u32,
    pub terms: Vec<GoldenTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Golden {
    pub schema: String,
    pub expansions: Vec<GoldenExpansion>,
}

impl Golden {
    pub fn parse(text: &str) -> Result<Golden, MoserError> {
        let g: Golden = serde_json::from_str(text).map_err(|e| MoserError::Golden(e.to_string()))?;
        if g.schema != SCHEMA {
            return Err(MoserError::Golden(format!("unsupported schema `{}`", g.schema)));
        }
        for ex in &g.expansions {
            for t in &ex.terms {
                GaussRational::parse(&t.coeff)?;
            }
        }
        Ok(g)
    }

    pub fn builtin() -> Golden {
        Golden::parse(DEFAULT_GOLDEN).expect("bundled golden data is valid")
    }

    pub fn get(&self, id: &str) -> Result<&GoldenExpansion, MoserError> {
        self.expansions.iter().find(|e| e.id == id).ok_or_else(|| MoserError::UnknownExpansion(id.to_string()))
    }
}

impl GoldenExpansion {
    /// The printed series evaluated on the given `E`.
    pub fn evaluate(&self, md: &MoserData) -> Result<GradedSeries, MoserError> {
        let mut acc = Poly::zero();
        for t in &self.terms {
            let c = GaussRational::parse(&t.coeff)?;
            let mono = Poly::monomial(c, t.mono);
            let term = match t.e {
                Some(d) => &mono * &md.e_derivative(d),
                None => mono,
            };
            acc = &acc + &term;
        }
        Ok(GradedSeries::new(acc, self.error_order))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_parses_and_roundtrips() {
        let g = Golden::builtin();
        assert_eq!(g.expansions.len(), 6);
        let text = serde_json::to_string(&g).unwrap();
        assert_eq!(Golden::parse(&text).unwrap(), g);
        assert!(Golden::parse(&text.replace(SCHEMA, "other/1")).is_err());
        assert!(g.get("nonexistent").is_err());
    }

    #[test]
    fn flat_torsion_expansion_vanishes() {
        let g = Golden::builtin();
        let md = MoserData::flat(8).unwrap();
        for id in ["torsion", "curvature", "pseudo_einstein", "connection_trace", "levi_derivative"] {
            assert!(g.get(id).unwrap().evaluate(&md).unwrap().is_zero(), "{id}");
        }
    }
}
