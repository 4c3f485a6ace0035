//! JSON term lists for polynomials and graded series.
//!
//! Each term maps an exponent triple `(deg_z, deg_z̄, deg_u)` to the
//! coefficient `[re_num, re_den, im_num, im_den]`, all decimal strings.

use serde::{Deserialize, Serialize};

use super::{GaussRational, GradedSeries, Poly, SymbolicError};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub exp: [u32; 3],
    pub coeff: [String; 4],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermList {
    pub terms: Vec<Term>,
    /// `None` for exact polynomials.
    pub error_order: Option<u32>,
}

impl TermList {
    pub fn from_poly(p: &Poly) -> Self {
        TermList {
            terms: p.terms().map(|(m, c)| Term { exp: *m, coeff: c.to_parts() }).collect(),
            error_order: None,
        }
    }

    pub fn from_series(s: &GradedSeries) -> Self {
        TermList { error_order: s.error_order(), ..TermList::from_poly(s.poly()) }
    }

    pub fn to_poly(&self) -> Result<Poly, SymbolicError> {
        let mut out = Poly::zero();
        for t in &self.terms {
            out.add_term(t.exp, &GaussRational::from_str_parts(&t.coeff)?);
        }
        Ok(out)
    }

    pub fn to_series(&self) -> Result<GradedSeries, SymbolicError> {
        let p = self.to_poly()?;
        Ok(match self.error_order {
            Some(k) => GradedSeries::new(p, k),
            None => GradedSeries::exact_unbounded(p),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec(((0u32..4, 0u32..4, 0u32..3), -9i64..9, 1i64..5, -9i64..9), 0..8).prop_map(|ts| {
            Poly::from_terms(ts.into_iter().map(|((a, b, c), rn, d, im)| ([a, b, c], GaussRational::from_parts(rn, d, im, d))))
        })
    }

    proptest! {
        #[test]
        fn json_roundtrip(p in arb_poly(), k in 1u32..12) {
            let s = GradedSeries::new(p, k);
            let text = serde_json::to_string(&TermList::from_series(&s)).unwrap();
            let back: TermList = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(back.to_series().unwrap(), s);
        }
    }
}
