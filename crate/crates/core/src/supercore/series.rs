use num_traits::{One, Zero};

use super::{Parity, SuperPoly, Universe};
use crate::error::{Error, Result};
use crate::rational::Q;

/// Precision marker for elements known exactly.
pub const EXACT: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParityKind {
    Zero,
    Even,
    Odd,
    Mixed,
}

/// A polynomial known exactly through adic order `order`.
///
/// Terms above `order` are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    pub poly: SuperPoly,
    pub order: u32,
}

impl TruncatedSeries {
    pub fn new(poly: SuperPoly, order: u32, u: &Universe) -> Self {
        let poly = if order == EXACT { poly } else { poly.truncate(u, order) };
        TruncatedSeries { poly, order }
    }

    pub fn exact(poly: SuperPoly) -> Self {
        TruncatedSeries { poly, order: EXACT }
    }

    pub fn zero() -> Self {
        Self::exact(SuperPoly::zero())
    }

    pub fn one(u: &Universe) -> Self {
        Self::exact(SuperPoly::one(u.len()))
    }

    pub fn constant(c: Q, u: &Universe) -> Self {
        Self::exact(SuperPoly::constant(u.len(), c))
    }

    pub fn var(id: usize, u: &Universe) -> Self {
        Self::exact(SuperPoly::var(u.len(), id))
    }

    pub fn is_exact(&self) -> bool {
        self.order == EXACT
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn with_order(&self, order: u32, u: &Universe) -> Self {
        Self::new(self.poly.clone(), order.min(self.order), u)
    }

    pub fn add(&self, other: &Self, u: &Universe) -> Self {
        Self::new(self.poly.add(&other.poly), self.order.min(other.order), u)
    }

    pub fn sub(&self, other: &Self, u: &Universe) -> Self {
        Self::new(self.poly.sub(&other.poly), self.order.min(other.order), u)
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries { poly: self.poly.neg(), order: self.order }
    }

    pub fn scale(&self, c: &Q) -> Self {
        TruncatedSeries { poly: self.poly.scale(c), order: self.order }
    }

    /// Lowest adic order present; `EXACT` for zero.
    pub fn low_order(&self, u: &Universe) -> u32 {
        self.poly.min_order(u).unwrap_or(EXACT)
    }

    /// Lowest adic order among non-constant terms; `EXACT` if none.
    pub fn low_nonconstant_order(&self, u: &Universe) -> u32 {
        self.poly.min_nonconstant_order(u).unwrap_or(EXACT)
    }

    /// Precision of a product of `self` and `other`.
    pub fn product_order(&self, other: &Self, u: &Universe) -> u32 {
        let a = self.order.saturating_add(other.low_order(u));
        let b = other.order.saturating_add(self.low_order(u));
        a.min(b)
    }

    /// Supercommutative product.
    pub fn mul(&self, other: &Self, u: &Universe) -> Self {
        let order = self.product_order(other, u);
        TruncatedSeries { poly: self.poly.mul(&other.poly, u, order), order }
    }

    pub fn parity_kind(&self, u: &Universe) -> ParityKind {
        let ps = self.poly.parities(u);
        match ps.as_slice() {
            [] => ParityKind::Zero,
            [Parity::Even] => ParityKind::Even,
            [Parity::Odd] => ParityKind::Odd,
            _ => ParityKind::Mixed,
        }
    }

    /// Parity of a homogeneous element; zero counts as even.
    pub fn parity(&self, u: &Universe) -> Result<Parity> {
        match self.parity_kind(u) {
            ParityKind::Zero | ParityKind::Even => Ok(Parity::Even),
            ParityKind::Odd => Ok(Parity::Odd),
            ParityKind::Mixed => Err(Error::MixedParity),
        }
    }

    /// True when `self` and `other` agree through adic order `n`.
    pub fn agrees_through(&self, other: &Self, n: u32, u: &Universe) -> bool {
        self.poly.sub(&other.poly).truncate(u, n).is_zero()
    }

    pub fn render(&self, u: &Universe) -> String {
        if self.is_exact() {
            self.poly.render(u)
        } else {
            format!("{} + O({})", self.poly.render(u), self.order.saturating_add(1))
        }
    }
}

/// Precision of a bracket-like operation: `p + gain - loss`, with `EXACT` absorbing.
pub fn bracket_order(p: u32, gain: u32, loss: u32) -> Result<u32> {
    if p == EXACT || gain == EXACT {
        return Ok(EXACT);
    }
    let total = p as u64 + gain as u64;
    if total < loss as u64 {
        return Err(Error::InsufficientPrecision { have: p, need: loss.saturating_sub(gain) });
    }
    Ok((total - loss as u64).min(EXACT as u64 - 1) as u32)
}

/// Binomial coefficient of `(1+t)^(-1/2)` at `t^k`.
pub fn inv_sqrt_coeff(k: u32) -> Q {
    let mut c = Q::one();
    for i in 0..k {
        c = c * (Q::from_integer((-1 - 2 * i as i64).into()) / Q::from_integer(2.into())) / Q::from_integer((i as i64 + 1).into());
    }
    c
}

/// `(1+t)^(-1/2)` for `t` with vanishing constant term, through order `max_order`.
///
/// `mul` supplies the product so the same routine serves commutative and star algebras.
pub fn inv_sqrt_series(
    t: &TruncatedSeries,
    max_order: u32,
    u: &Universe,
    mut mul: impl FnMut(&TruncatedSeries, &TruncatedSeries) -> Result<TruncatedSeries>,
) -> Result<TruncatedSeries> {
    if !t.poly.constant_term().is_zero() {
        return Err(Error::NonzeroConstant);
    }
    let mut acc = TruncatedSeries::one(u).with_order(max_order, u);
    let mut power = TruncatedSeries::one(u);
    let mut k = 0u32;
    loop {
        k += 1;
        power = mul(&power, t)?.with_order(max_order, u);
        if power.is_zero() && power.order >= acc.order {
            break;
        }
        acc = acc.add(&power.scale(&inv_sqrt_coeff(k)), u);
        if power.low_order(u) > acc.order {
            break;
        }
        if k > 4 * max_order.min(4096) + 8 {
            return Err(Error::NonConvergence { degree: k });
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qf;

    #[test]
    fn coeffs() {
        assert_eq!(inv_sqrt_coeff(0), qf(1, 1));
        assert_eq!(inv_sqrt_coeff(1), qf(-1, 2));
        assert_eq!(inv_sqrt_coeff(2), qf(3, 8));
        assert_eq!(inv_sqrt_coeff(3), qf(-5, 16));
    }
}
