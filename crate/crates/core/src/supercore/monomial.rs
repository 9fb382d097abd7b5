use smallvec::SmallVec;
use std::fmt::Write;

use super::{Parity, Universe};

/// Exponent vector indexed by variable id. Odd exponents are 0 or 1; the
/// represented product is taken in ascending id order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(SmallVec<[u16; 12]>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(SmallVec::from_elem(0, n))
    }

    pub fn var(n: usize, id: usize) -> Self {
        let mut m = Self::one(n);
        m.0[id] = 1;
        m
    }

    pub fn from_exponents(exps: &[u16]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn exp(&self, id: usize) -> u16 {
        self.0[id]
    }

    pub fn set_exp(&mut self, id: usize, e: u16) {
        self.0[id] = e;
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    /// Adic order: exponents summed over variables in the maximal ideal.
    pub fn order(&self, u: &Universe) -> u32 {
        self.0.iter().zip(u.vars()).filter(|(_, v)| v.adic_unit).map(|(&e, _)| e as u32).sum()
    }

    pub fn weight(&self, u: &Universe) -> i32 {
        self.0.iter().zip(u.vars()).map(|(&e, v)| e as i32 * v.weight).sum()
    }

    pub fn parity(&self, u: &Universe) -> Parity {
        let odd = self.0.iter().zip(u.vars()).filter(|(&e, v)| e > 0 && v.parity.is_odd()).count();
        Parity::from_odd(odd % 2 == 1)
    }

    pub fn is_canonical(&self, u: &Universe) -> bool {
        self.len() == u.len() && self.0.iter().zip(u.vars()).all(|(&e, v)| !v.parity.is_odd() || e <= 1)
    }

    fn odd_count(&self, u: &Universe, range: impl Iterator<Item = usize>) -> usize {
        range.filter(|&i| self.0[i] > 0 && u.is_odd(i)).count()
    }

    /// Supercommutative product. `None` when an odd variable would repeat,
    /// otherwise the Koszul sign (`true` = negative) and the canonical monomial.
    pub fn mul(&self, other: &Monomial, u: &Universe) -> Option<(bool, Monomial)> {
        let mut neg = false;
        let mut odd_in_self_above = 0usize;
        let n = self.len();
        let mut out = self.clone();
        for i in (0..n).rev() {
            let odd = u.is_odd(i);
            if odd && other.0[i] > 0 {
                if self.0[i] > 0 {
                    return None;
                }
                if odd_in_self_above % 2 == 1 {
                    neg = !neg;
                }
            }
            if odd && self.0[i] > 0 {
                odd_in_self_above += 1;
            }
            out.0[i] += other.0[i];
        }
        Some((neg, out))
    }

    /// Left derivative by variable `v`: `m = x_v * d` up to the returned factor.
    pub fn left_derivative(&self, v: usize, u: &Universe) -> Option<(i64, Monomial)> {
        let e = self.0[v];
        if e == 0 {
            return None;
        }
        let mut out = self.clone();
        out.0[v] -= 1;
        if u.is_odd(v) {
            let sign = if self.odd_count(u, 0..v) % 2 == 1 { -1 } else { 1 };
            Some((sign, out))
        } else {
            Some((e as i64, out))
        }
    }

    /// Right derivative by variable `v`: `m = d * x_v` up to the returned factor.
    pub fn right_derivative(&self, v: usize, u: &Universe) -> Option<(i64, Monomial)> {
        let e = self.0[v];
        if e == 0 {
            return None;
        }
        let mut out = self.clone();
        out.0[v] -= 1;
        if u.is_odd(v) {
            let sign = if self.odd_count(u, v + 1..self.len()) % 2 == 1 { -1 } else { 1 };
            Some((sign, out))
        } else {
            Some((e as i64, out))
        }
    }

    pub fn render(&self, u: &Universe) -> String {
        let mut s = String::new();
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !s.is_empty() {
                s.push('*');
            }
            s.push_str(&u.var(i).name);
            if e > 1 {
                let _ = write!(s, "^{e}");
            }
        }
        if s.is_empty() {
            s.push('1');
        }
        s
    }
}
