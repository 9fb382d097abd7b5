use num_traits::{One, Zero};
use std::collections::BTreeMap;

use super::{Monomial, Parity, Universe};
use crate::rational::{format_rational, Q};

/// Sparse polynomial: canonical monomial -> nonzero coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SuperPoly {
    terms: BTreeMap<Monomial, Q>,
}

impl SuperPoly {
    pub fn zero() -> Self {
        SuperPoly { terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: Q) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::one(n), c);
        p
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Q::one())
    }

    pub fn var(n: usize, id: usize) -> Self {
        Self::monomial(Monomial::var(n, id), Q::one())
    }

    pub fn monomial(m: Monomial, c: Q) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    /// Linear combination of variables plus a constant.
    pub fn linear(n: usize, coeffs: &[Q], constant: Q) -> Self {
        let mut p = Self::constant(n, constant);
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::var(n, i), c.clone());
        }
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Q)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, Q)> {
        self.terms.into_iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    /// Largest monomial in the term order, with its coefficient.
    pub fn leading(&self) -> Option<(&Monomial, &Q)> {
        self.terms.iter().next_back()
    }

    pub fn constant_term(&self) -> Q {
        self.terms.iter().find(|(m, _)| m.is_one()).map(|(_, c)| c.clone()).unwrap_or_else(Q::zero)
    }

    pub fn add(&self, other: &SuperPoly) -> SuperPoly {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &SuperPoly) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn sub(&self, other: &SuperPoly) -> SuperPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> SuperPoly {
        self.scale(&-Q::one())
    }

    pub fn scale(&self, c: &Q) -> SuperPoly {
        if c.is_zero() {
            return SuperPoly::zero();
        }
        SuperPoly { terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    /// Supercommutative product, dropping terms of adic order above `max_order`.
    pub fn mul(&self, other: &SuperPoly, u: &Universe, max_order: u32) -> SuperPoly {
        let right: Vec<(u32, &Monomial, &Q)> = other.terms.iter().map(|(m, c)| (m.order(u), m, c)).collect();
        let mut out = SuperPoly::zero();
        for (ma, ca) in &self.terms {
            let oa = ma.order(u);
            if oa > max_order {
                continue;
            }
            for &(ob, mb, cb) in &right {
                if oa.saturating_add(ob) > max_order {
                    continue;
                }
                if let Some((neg, m)) = ma.mul(mb, u) {
                    let c = ca * cb;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        out
    }

    pub fn truncate(&self, u: &Universe, max_order: u32) -> SuperPoly {
        SuperPoly { terms: self.terms.iter().filter(|(m, _)| m.order(u) <= max_order).map(|(m, c)| (m.clone(), c.clone())).collect() }
    }

    /// Minimal adic order among the terms; `None` for zero.
    pub fn min_order(&self, u: &Universe) -> Option<u32> {
        self.terms.keys().map(|m| m.order(u)).min()
    }

    pub fn max_order(&self, u: &Universe) -> Option<u32> {
        self.terms.keys().map(|m| m.order(u)).max()
    }

    /// Minimal adic order among the non-constant terms.
    pub fn min_nonconstant_order(&self, u: &Universe) -> Option<u32> {
        self.terms.keys().filter(|m| !m.is_one()).map(|m| m.order(u)).min()
    }

    pub fn parities(&self, u: &Universe) -> Vec<Parity> {
        let mut ps: Vec<Parity> = self.terms.keys().map(|m| m.parity(u)).collect();
        ps.sort();
        ps.dedup();
        ps
    }

    pub fn weights(&self, u: &Universe) -> Vec<i32> {
        let mut ws: Vec<i32> = self.terms.keys().map(|m| m.weight(u)).collect();
        ws.sort();
        ws.dedup();
        ws
    }

    pub fn filter(&self, mut keep: impl FnMut(&Monomial) -> bool) -> SuperPoly {
        SuperPoly { terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect() }
    }

    /// Applies a coefficient-preserving monomial map, summing collisions.
    pub fn map_monomials(&self, mut f: impl FnMut(&Monomial) -> Option<(Q, Monomial)>) -> SuperPoly {
        let mut out = SuperPoly::zero();
        for (m, c) in &self.terms {
            if let Some((k, m2)) = f(m) {
                out.add_term(m2, c * k);
            }
        }
        out
    }

    /// Evaluates at a point; `None` when a variable with a nonzero value is odd.
    pub fn eval(&self, point: &[Q], u: &Universe) -> Option<Q> {
        let mut total = Q::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if u.is_odd(i) {
                    if !point[i].is_zero() {
                        return None;
                    }
                    v = Q::zero();
                    break;
                }
                for _ in 0..e {
                    v *= &point[i];
                }
            }
            total += v;
        }
        Some(total)
    }

    pub fn render(&self, u: &Universe) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (m, c) in &self.terms {
            let neg = c < &Q::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if m.is_one() {
                s.push_str(&format_rational(&abs));
            } else if abs.is_one() {
                s.push_str(&m.render(u));
            } else {
                s.push_str(&format!("{}*{}", format_rational(&abs), m.render(u)));
            }
        }
        s
    }
}
