use num_traits::{One, Zero};
use std::collections::BTreeMap;

use crate::rational::Q;
use crate::supercore::{Monomial, SuperPoly};

/// Linear span of polynomials in echelon form on leading monomials.
///
/// Every row remembers which inserted items it combines, so membership
/// comes with coordinates.
#[derive(Debug, Clone, Default)]
pub struct PolySpan {
    rows: BTreeMap<Monomial, (SuperPoly, BTreeMap<usize, Q>)>,
    inserted: usize,
}

impl PolySpan {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, p: &SuperPoly) -> (SuperPoly, BTreeMap<usize, Q>) {
        let mut p = p.clone();
        let mut combo: BTreeMap<usize, Q> = BTreeMap::new();
        while let Some((lead, c)) = p.leading() {
            let Some((row, rc)) = self.rows.get(lead) else { break };
            let c = c.clone();
            p = p.sub(&row.scale(&c));
            for (k, v) in rc {
                let e = combo.entry(*k).or_insert_with(Q::zero);
                *e += &c * v;
            }
        }
        combo.retain(|_, v| !v.is_zero());
        (p, combo)
    }

    /// Coordinates of `p` over the inserted items, if it lies in the span.
    pub fn express(&self, p: &SuperPoly) -> Option<BTreeMap<usize, Q>> {
        let (rest, combo) = self.reduce(p);
        rest.is_zero().then_some(combo)
    }

    pub fn contains(&self, p: &SuperPoly) -> bool {
        self.reduce(p).0.is_zero()
    }

    /// Inserts item number `self.inserted()`; returns whether the span grew.
    pub fn insert(&mut self, p: &SuperPoly) -> bool {
        let id = self.inserted;
        self.inserted += 1;
        let (rest, combo) = self.reduce(p);
        let Some((lead, c)) = rest.leading() else { return false };
        let lead = lead.clone();
        let inv = Q::one() / c;
        // rest = p - sum combo_k item_k, so the row is (item_id - sum combo_k item_k) / c.
        let mut row_combo: BTreeMap<usize, Q> = combo.into_iter().map(|(k, v)| (k, -v * &inv)).collect();
        row_combo.insert(id, inv.clone());
        self.rows.insert(lead, (rest.scale(&inv), row_combo));
        true
    }

    pub fn inserted(&self) -> usize {
        self.inserted
    }
}
