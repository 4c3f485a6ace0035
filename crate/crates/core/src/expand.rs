//! Printable series for individual quantities.

use std::str::FromStr;

use serde::Serialize;

use crate::heisenberg::{flat_model, szego_candidate};
use crate::moser::{moser_structure, Golden, MoserData, MoserError};
use crate::symbolic::{GradedSeries, Poly};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    R,
    A,
    G,
    Lambda,
    PeTensor,
    Szego,
}

impl Quantity {
    pub const ALL: [Quantity; 6] = [Quantity::R, Quantity::A, Quantity::G, Quantity::Lambda, Quantity::PeTensor, Quantity::Szego];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::R => "R",
            Quantity::A => "A",
            Quantity::G => "g",
            Quantity::Lambda => "lambda",
            Quantity::PeTensor => "pe_tensor",
            Quantity::Szego => "szego",
        }
    }

    /// Id of the printed expansion, if there is one.
    fn golden_id(self) -> Option<&'static str> {
        match self {
            Quantity::R => Some("curvature"),
            Quantity::A => Some("torsion"),
            Quantity::Lambda => Some("lambda"),
            Quantity::PeTensor => Some("pseudo_einstein"),
            Quantity::G | Quantity::Szego => None,
        }
    }
}

impl FromStr for Quantity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Quantity::ALL.into_iter().find(|q| q.name() == s).ok_or_else(|| format!("unknown quantity `{s}`"))
    }
}

/// Which `E` to expand on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Surface {
    Flat,
    Random(u64),
}

#[derive(Clone, Debug, Serialize)]
pub struct Term {
    pub coeff: String,
    /// Exponents of `(z, z̄, u)`.
    pub mono: [u32; 3],
}

#[derive(Clone, Debug, Serialize)]
pub struct Expansion {
    pub quantity: String,
    /// `E` the series was computed on, or `None` for closed forms.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<u32>,
    /// `None` when exact.
    pub error_order: Option<u32>,
    pub value: String,
    pub terms: Vec<Term>,
    /// The printed form of the series in terms of `E`, when there is one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub printed: Option<String>,
}

fn terms(p: &Poly) -> Vec<Term> {
    p.terms().map(|(m, c)| Term { coeff: c.to_string(), mono: *m }).collect()
}

#[derive(Debug, thiserror::Error)]
pub enum ExpandError {
    #[error(transparent)]
    Moser(#[from] MoserError),
    #[error(transparent)]
    Structure(#[from] crate::structure::StructureError),
}

pub fn expand(q: Quantity, order: u32, surface: Surface) -> Result<Expansion, ExpandError> {
    if q == Quantity::Szego {
        let k = szego_candidate(&flat_model()?)?;
        return Ok(Expansion {
            quantity: q.name().into(),
            e: None,
            order: None,
            error_order: None,
            value: k.to_string(),
            terms: Vec::new(),
            printed: Some("P̊′(log G̊) = 16 Re((|z|² − iu)⁻²)".into()),
        });
    }
    let md = match surface {
        Surface::Flat => MoserData::flat(order)?,
        Surface::Random(seed) => MoserData::random(seed, order)?,
    };
    let ms = moser_structure(&md)?;
    let st = &ms.solved;
    let series: GradedSeries = match q {
        Quantity::R => st.r.clone(),
        Quantity::A => st.torsion.clone(),
        Quantity::G => st.g.clone(),
        Quantity::Lambda => st.z1.component(crate::symbolic::Var::U).clone(),
        Quantity::PeTensor => st.pseudo_einstein_tensor().map_err(MoserError::from)?,
        Quantity::Szego => unreachable!(),
    };
    let printed = q.golden_id().and_then(|id| Golden::builtin().get(id).ok().map(|g| g.display.clone()));
    Ok(Expansion {
        quantity: q.name().into(),
        e: Some(md.e().to_string()),
        order: Some(order),
        error_order: series.error_order(),
        value: series.to_string(),
        terms: terms(series.poly()),
        printed,
    })
}

impl Expansion {
    pub fn to_text(&self) -> String {
        let mut out = format!("{}", self.quantity);
        if let Some(e) = &self.e {
            out.push_str(&format!(" on E = {e}"));
        }
        out.push('\n');
        if let Some(p) = &self.printed {
            out.push_str(&format!("  printed: {p}\n"));
        }
        out.push_str(&format!("  value:   {}\n", self.value));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_curvature_is_zero() {
        let e = expand(Quantity::R, 8, Surface::Flat).unwrap();
        assert!(e.terms.is_empty());
        assert!(e.value.starts_with('0'), "{}", e.value);
    }

    #[test]
    fn names_round_trip() {
        for q in Quantity::ALL {
            assert_eq!(q.name().parse::<Quantity>().unwrap(), q);
        }
        assert!("Rx".parse::<Quantity>().is_err());
    }
}
