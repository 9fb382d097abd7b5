//! Supercommutative polynomials and truncated power series over exact rationals.
//!
//! Every variable carries a parity, an integer weight for the `C^x`-action and a
//! flag saying whether it lies in the maximal ideal (and so counts towards the
//! adic order). Odd variables square to zero and anticommute.

mod monomial;
mod poly;
mod series;

pub use monomial::Monomial;
pub use poly::SuperPoly;
pub use series::{bracket_order, inv_sqrt_coeff, inv_sqrt_series, ParityKind, TruncatedSeries, EXACT};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn from_odd(odd: bool) -> Self {
        if odd {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn plus(self, other: Parity) -> Parity {
        Parity::from_odd(self.is_odd() ^ other.is_odd())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedVariable {
    pub id: usize,
    pub name: String,
    pub parity: Parity,
    pub weight: i32,
    pub adic_unit: bool,
}

/// The ordered set of variables an algebra lives on. Ids are positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Universe {
    vars: Vec<GradedVariable>,
    hbar: Option<usize>,
}

impl Universe {
    pub fn new(vars: Vec<GradedVariable>) -> Result<Self> {
        for (i, v) in vars.iter().enumerate() {
            if v.id != i {
                return Err(Error::Validation(format!("variable {} has id {}, expected {i}", v.name, v.id)));
            }
        }
        Ok(Universe { vars, hbar: None })
    }

    /// Convenience constructor: `(name, parity, weight)` triples, all adic.
    pub fn from_spec(spec: &[(&str, Parity, i32)]) -> Self {
        let vars = spec
            .iter()
            .enumerate()
            .map(|(id, &(name, parity, weight))| GradedVariable {
                id,
                name: name.to_string(),
                parity,
                weight,
                adic_unit: true,
            })
            .collect();
        Universe { vars, hbar: None }
    }

    /// Appends the central even variable `hbar` of weight 1 (adic, see crate docs).
    pub fn with_hbar(&self) -> Universe {
        let mut vars = self.vars.clone();
        let id = vars.len();
        vars.push(GradedVariable { id, name: "hbar".into(), parity: Parity::Even, weight: 1, adic_unit: true });
        Universe { vars, hbar: Some(id) }
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn vars(&self) -> &[GradedVariable] {
        &self.vars
    }

    pub fn var(&self, id: usize) -> &GradedVariable {
        &self.vars[id]
    }

    pub fn is_odd(&self, id: usize) -> bool {
        self.vars[id].parity.is_odd()
    }

    pub fn weight(&self, id: usize) -> i32 {
        self.vars[id].weight
    }

    pub fn hbar(&self) -> Option<usize> {
        self.hbar
    }

    pub fn find(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn check(&self, m: &Monomial) -> Result<()> {
        if m.len() != self.len() {
            return Err(Error::UniverseMismatch { expected: self.len(), found: m.len() });
        }
        Ok(())
    }
}
