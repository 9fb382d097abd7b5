//! Equivariant Darboux–Weinstein normalization, generic over the bracket algebra.

use num_traits::{One, Zero};
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::poisson::{linear_element, BracketAlgebra, SymplecticItem, SymplecticSubspace};
use crate::rational::{factorial, format_rational, rational_sqrt, Q};
use crate::supercore::{inv_sqrt_series, Parity, TruncatedSeries};

type TS = TruncatedSeries;

fn require_parity<A: BracketAlgebra + ?Sized>(a: &A, x: &TS, want: Parity) -> Result<()> {
    let p = x.parity(a.universe())?;
    if x.is_zero() || p == want {
        Ok(())
    } else {
        Err(Error::WrongParity { expected: if want.is_odd() { "odd" } else { "even" } })
    }
}

fn require_ideal(xs: &[&TS]) -> Result<()> {
    if xs.iter().any(|x| !x.poly.constant_term().is_zero()) {
        return Err(Error::NonzeroConstant);
    }
    Ok(())
}

fn mul_at<A: BracketAlgebra + ?Sized>(a: &A, x: &TS, y: &TS, work: u32) -> Result<TS> {
    Ok(a.mul(x, y)?.with_order(work, a.universe()))
}

fn br<A: BracketAlgebra + ?Sized>(a: &A, x: &TS, y: &TS, work: u32) -> Result<TS> {
    Ok(a.bracket(x, y)?.with_order(work, a.universe()))
}

fn sign_fact(i: u32, j: u32, neg_i: bool) -> Q {
    let s = if neg_i && i % 2 == 1 { -Q::one() } else { Q::one() };
    s / (factorial(i) * factorial(j))
}

/// Precision and degree of `x - c` for the constant `c`, checked through order `n`.
fn defect<A: BracketAlgebra + ?Sized>(a: &A, x: &TS, c: &Q, n: u32) -> Result<Option<u32>> {
    let u = a.universe();
    if x.order < n {
        return Err(Error::InsufficientPrecision { have: x.order, need: n });
    }
    let t = x.poly.sub(&crate::supercore::SuperPoly::constant(u.len(), c.clone())).truncate(u, n);
    Ok(t.min_order(u))
}

/// Corrects `g` so that `{f, g} = 1` through order `n`; elements are kept at order `work`.
pub fn even_correct<A: BracketAlgebra + ?Sized>(a: &A, f: &TS, g: &TS, n: u32, work: u32) -> Result<TS> {
    let u = a.universe();
    require_parity(a, f, Parity::Even)?;
    require_parity(a, g, Parity::Even)?;
    require_ideal(&[f, g])?;
    let one = TS::one(u);
    let mut g = g.with_order(work, u);
    let mut last = 0u32;
    loop {
        let b = a.bracket(f, &g)?;
        let c = b.poly.constant_term();
        if !c.is_one() {
            return Err(Error::BadNormalization { pair: "{f,g}".into(), found: format_rational(&c) });
        }
        let Some(d) = defect(a, &b, &Q::one(), n)? else {
            return Ok(g);
        };
        if d <= last {
            return Err(Error::NonConvergence { degree: d });
        }
        last = d;
        let t = b.sub(&one, u).with_order(work, u);
        let mut x = t;
        let mut gp = g.clone();
        let mut corr = TS::zero();
        for i in 1.. {
            let term = mul_at(a, &gp, &x, work)?.scale(&sign_fact(i, 0, true));
            corr = corr.add(&term, u);
            gp = mul_at(a, &gp, &g, work)?;
            if gp.low_order(u) > work {
                break;
            }
            x = br(a, f, &x, work)?;
        }
        g = g.add(&corr, u).with_order(work, u);
    }
}

/// Projection onto `ker ad_f ∩ ker ad_g` for an even pair with `{f, g} = 1`:
/// `sum (-1)^i / (i! j!) g^i (ad_f^i ad_g^j (a)) f^j`.
///
/// Powers of `g` multiply on the left and powers of `f` on the right, which is what
/// makes the sum telescope when `f` and `g` do not commute.
pub fn even_split_project<A: BracketAlgebra + ?Sized>(a: &A, x: &TS, f: &TS, g: &TS, work: u32) -> Result<TS> {
    let u = a.universe();
    require_ideal(&[f, g])?;
    let mut out = TS::zero();
    let mut yj = x.with_order(work, u);
    let mut fj = TS::one(u);
    for j in 0.. {
        let lf = fj.low_order(u);
        if lf > work {
            break;
        }
        let mut xi = yj.clone();
        let mut gi = TS::one(u);
        for i in 0.. {
            if gi.low_order(u).saturating_add(lf) > work {
                break;
            }
            let term = mul_at(a, &gi, &mul_at(a, &xi, &fj, work)?, work)?.scale(&sign_fact(i, j, true));
            out = out.add(&term, u);
            gi = mul_at(a, &gi, g, work)?;
            if gi.low_order(u).saturating_add(lf) <= work {
                xi = br(a, f, &xi, work)?;
            }
        }
        fj = mul_at(a, &fj, f, work)?;
        if fj.low_order(u) <= work {
            yj = br(a, g, &yj, work)?;
        }
    }
    Ok(out.with_order(work, u))
}

/// Components `b_ij` in the centralizer with `x = sum g^i f^j b_ij`.
pub fn even_decompose<A: BracketAlgebra + ?Sized>(
    a: &A,
    x: &TS,
    f: &TS,
    g: &TS,
    work: u32,
) -> Result<BTreeMap<(u32, u32), TS>> {
    let u = a.universe();
    let lf = f.low_order(u).max(1);
    let lg = g.low_order(u).max(1);
    let mut out = BTreeMap::new();
    let mut yj = x.with_order(work, u);
    for j in 0..=work / lf {
        let mut xi = yj.clone();
        for i in 0..=(work - j * lf) / lg {
            if !xi.is_zero() {
                let b = even_split_project(a, &xi, f, g, xi.order.min(work))?.scale(&sign_fact(i, j, false));
                if !b.is_zero() {
                    out.insert((i, j), b);
                }
            }
            if (i + 1) * lg + j * lf <= work {
                xi = br(a, f, &xi, work)?;
            }
        }
        if (j + 1) * lf <= work {
            yj = br(a, g, &yj, work)?.neg();
        }
    }
    Ok(out)
}

/// Reassembles `sum g^i f^j b_ij`.
pub fn even_reassemble<A: BracketAlgebra + ?Sized>(
    a: &A,
    parts: &BTreeMap<(u32, u32), TS>,
    f: &TS,
    g: &TS,
    work: u32,
) -> Result<TS> {
    let u = a.universe();
    let mut out = TS::zero();
    for (&(i, j), b) in parts {
        let mut m = b.clone();
        for _ in 0..j {
            m = mul_at(a, f, &m, work)?;
        }
        for _ in 0..i {
            m = mul_at(a, g, &m, work)?;
        }
        out = out.add(&m, u);
    }
    Ok(out)
}

/// `x * (1 + t)^(-1/2)` with `t = {x, x} / c - 1`, where `c` is the constant of `{x, x}`.
fn normalize_odd_by<A: BracketAlgebra + ?Sized>(a: &A, x: &TS, c: &Q, work: u32) -> Result<TS> {
    let u = a.universe();
    let b = a.bracket(x, x)?;
    let t = b.scale(&(Q::one() / c)).sub(&TS::one(u), u).with_order(work, u);
    let s = inv_sqrt_series(&t, work, u, |p, q| mul_at(a, p, q, work))?;
    mul_at(a, x, &s, work)
}

/// Odd `h` with `{h, h} = 1` built from `f`, or from `f + g / (2c)` when `{f, f}` lies in the ideal.
pub fn odd_normalize<A: BracketAlgebra + ?Sized>(a: &A, f: &TS, g: Option<&TS>, work: u32) -> Result<TS> {
    let u = a.universe();
    require_parity(a, f, Parity::Odd)?;
    let mut h = f.with_order(work, u);
    let mut c = a.bracket(&h, &h)?.poly.constant_term();
    if c.is_zero() {
        let g = g.ok_or(Error::DegenerateSubspace)?;
        require_parity(a, g, Parity::Odd)?;
        let cfg = a.bracket(f, g)?.poly.constant_term();
        if cfg.is_zero() {
            return Err(Error::DegenerateSubspace);
        }
        h = h.add(&g.scale(&(Q::one() / (Q::from_integer(2.into()) * cfg))), u);
        c = a.bracket(&h, &h)?.poly.constant_term();
    }
    let s = rational_sqrt(&c).ok_or_else(|| Error::IrrationalNormalization(format_rational(&c)))?;
    let h = h.scale(&(Q::one() / s));
    normalize_odd_by(a, &h, &Q::one(), work)
}

/// `(b0, b1)` with `x = b0 + h b1`, both in `ker ad_h`.
pub fn odd_split_project<A: BracketAlgebra + ?Sized>(a: &A, x: &TS, h: &TS, work: u32) -> Result<(TS, TS)> {
    let u = a.universe();
    let b1 = br(a, h, x, work)?;
    let b0 = x.sub(&mul_at(a, h, &b1, work)?, u).with_order(work, u);
    Ok((b0, b1))
}

/// Flattens an odd pair: `{f, f} = {g, g} = 0`, `{f, g} = 1`.
///
/// Uses `h± = f ± g`, normalized to `{h+, h+} = 2`, `{h-, h-} = -2`, `{h+, h-} = 0`,
/// then returns `((h+ + h-)/2, (h+ - h-)/2)`.
pub fn odd_pair_flatten<A: BracketAlgebra + ?Sized>(a: &A, f: &TS, g: &TS, work: u32) -> Result<(TS, TS)> {
    let u = a.universe();
    require_parity(a, f, Parity::Odd)?;
    require_parity(a, g, Parity::Odd)?;
    let c = a.bracket(f, g)?.poly.constant_term();
    if !c.is_one() {
        return Err(Error::BadNormalization { pair: "{f,g}".into(), found: format_rational(&c) });
    }
    for x in [f, g] {
        if !a.bracket(x, x)?.poly.constant_term().is_zero() {
            return Err(Error::InvertibleSelfBracket);
        }
    }
    let (wf, wg) = (f.poly.weights(u), g.poly.weights(u));
    if wf != wg || wf.len() > 1 {
        let w = |v: &Vec<i32>| v.first().copied().unwrap_or(0);
        return Err(Error::InhomogeneousOddPair(w(&wf), w(&wg)));
    }
    let two = Q::from_integer(2.into());
    let half = Q::one() / &two;
    let hp = normalize_odd_by(a, &f.add(g, u).with_order(work, u), &two, work)?;
    let hm0 = f.sub(g, u).with_order(work, u);
    let proj = mul_at(a, &hp, &br(a, &hp, &hm0, work)?, work)?.scale(&half);
    let hm1 = hm0.sub(&proj, u).with_order(work, u);
    let hm = normalize_odd_by(a, &hm1, &-two, work)?;
    let f_inf = hp.add(&hm, u).scale(&half);
    let g_inf = hp.sub(&hm, u).scale(&half);
    Ok((f_inf, g_inf))
}

/// Projection onto `ker ad_f ∩ ker ad_g` for a flat odd pair: `(1 - g ad_f)(1 - f ad_g)`.
pub fn odd_pair_project<A: BracketAlgebra + ?Sized>(a: &A, x: &TS, f: &TS, g: &TS, work: u32) -> Result<TS> {
    let u = a.universe();
    let x = x.with_order(work, u);
    let x1 = x.sub(&mul_at(a, f, &br(a, g, &x, work)?, work)?, u);
    let x2 = x1.sub(&mul_at(a, g, &br(a, f, &x1, work)?, work)?, u);
    Ok(x2.with_order(work, u))
}

/// Components for a flat odd pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OddPairParts {
    pub b0: TS,
    pub bf: TS,
    pub bg: TS,
    pub bfg: TS,
}

/// `x = b0 + f bf + g bg + f g bfg` with all components in the joint centralizer.
pub fn odd_pair_decompose<A: BracketAlgebra + ?Sized>(a: &A, x: &TS, f: &TS, g: &TS, work: u32) -> Result<OddPairParts> {
    let d1 = br(a, f, x, work)?;
    let d2 = br(a, g, x, work)?;
    Ok(OddPairParts {
        b0: odd_pair_project(a, x, f, g, work)?,
        bf: odd_pair_project(a, &d2, f, g, work)?,
        bg: odd_pair_project(a, &d1, f, g, work)?,
        bfg: br(a, g, &d1, work)?.neg(),
    })
}

pub fn odd_pair_reassemble<A: BracketAlgebra + ?Sized>(a: &A, p: &OddPairParts, f: &TS, g: &TS, work: u32) -> Result<TS> {
    let u = a.universe();
    let fg = mul_at(a, f, &mul_at(a, g, &p.bfg, work)?, work)?;
    Ok(p.b0.add(&mul_at(a, f, &p.bf, work)?, u).add(&mul_at(a, g, &p.bg, work)?, u).add(&fg, u))
}

/// One normalized block of a chart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChartItem {
    EvenPair(TS, TS),
    OddSelf(TS),
    OddPair(TS, TS),
}

impl ChartItem {
    pub fn elements(&self) -> Vec<&TS> {
        match self {
            ChartItem::EvenPair(f, g) | ChartItem::OddPair(f, g) => vec![f, g],
            ChartItem::OddSelf(h) => vec![h],
        }
    }

    /// Expected brackets among the block's own elements, as `(i, j, value)`.
    fn relations(&self) -> Vec<(usize, usize, Q)> {
        match self {
            ChartItem::EvenPair(..) => vec![(0, 1, Q::one())],
            ChartItem::OddSelf(_) => vec![(0, 0, Q::one())],
            ChartItem::OddPair(..) => vec![(0, 1, Q::one()), (0, 0, Q::zero()), (1, 1, Q::zero())],
        }
    }
}

/// Darboux coordinates on `V` and generators of their centralizer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DarbouxChart {
    pub coords: Vec<ChartItem>,
    pub centralizer: Vec<TS>,
    pub order: u32,
}

/// A failed relation, with the rendered nonzero remainder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Residual {
    pub label: String,
    pub residual: String,
}

impl DarbouxChart {
    pub fn coordinate_elements(&self) -> Vec<&TS> {
        self.coords.iter().flat_map(|c| c.elements()).collect()
    }

    /// Every relation of the chart that fails through its order, or cannot be certified.
    pub fn residuals<A: BracketAlgebra + ?Sized>(&self, a: &A) -> Vec<Residual> {
        let u = a.universe();
        let n = self.order;
        let mut out = Vec::new();
        let mut check = |label: String, x: &TS, y: &TS, want: &Q| match a.bracket(x, y) {
            Ok(b) if b.order < n => {
                out.push(Residual { label, residual: format!("precision {} below {n}", b.order) })
            }
            Ok(b) => {
                let r = b.poly.sub(&crate::supercore::SuperPoly::constant(u.len(), want.clone())).truncate(u, n);
                if !r.is_zero() {
                    out.push(Residual { label, residual: r.render(u) });
                }
            }
            Err(e) => out.push(Residual { label, residual: e.to_string() }),
        };
        for (k, item) in self.coords.iter().enumerate() {
            let els = item.elements();
            for (i, j, v) in item.relations() {
                check(format!("coord {k}: ({i},{j})"), els[i], els[j], &v);
            }
            for (l, other) in self.coords.iter().enumerate().skip(k + 1) {
                for (i, x) in els.iter().enumerate() {
                    for (j, y) in other.elements().iter().enumerate() {
                        check(format!("coords {k}.{i} vs {l}.{j}"), x, y, &Q::zero());
                    }
                }
            }
        }
        for (c, z) in self.centralizer.iter().enumerate() {
            for (k, item) in self.coords.iter().enumerate() {
                for (i, x) in item.elements().iter().enumerate() {
                    check(format!("centralizer {c} vs coord {k}.{i}"), z, x, &Q::zero());
                }
            }
        }
        out
    }

    /// Elements that are not weight-homogeneous, with their weights.
    pub fn inhomogeneous<A: BracketAlgebra + ?Sized>(&self, a: &A) -> Vec<(String, Vec<i32>)> {
        let u = a.universe();
        let mut out = Vec::new();
        for (k, item) in self.coords.iter().enumerate() {
            for (i, x) in item.elements().iter().enumerate() {
                let w = x.poly.weights(u);
                if w.len() > 1 {
                    out.push((format!("coord {k}.{i}"), w));
                }
            }
        }
        for (c, z) in self.centralizer.iter().enumerate() {
            let w = z.poly.weights(u);
            if w.len() > 1 {
                out.push((format!("centralizer {c}"), w));
            }
        }
        out
    }
}

/// Projects `x` onto the centralizer of one normalized block.
pub fn project_onto<A: BracketAlgebra + ?Sized>(a: &A, item: &ChartItem, x: &TS, work: u32) -> Result<TS> {
    match item {
        ChartItem::EvenPair(f, g) => even_split_project(a, x, f, g, work),
        ChartItem::OddSelf(h) => Ok(odd_split_project(a, x, h, work)?.0),
        ChartItem::OddPair(f, g) => odd_pair_project(a, x, f, g, work),
    }
}

/// Normalizes `V` block by block, projecting every later vector onto the current centralizer.
///
/// Relations are certified through order `n`; elements are carried at order `work > n`.
pub fn equivariant_darboux<A: BracketAlgebra + ?Sized>(
    a: &A,
    v: &SymplecticSubspace,
    n: u32,
    work: u32,
) -> Result<DarbouxChart> {
    let u = a.universe();
    let mut pending: Vec<TS> = Vec::new();
    for item in &v.items {
        for vec in item.vectors() {
            pending.push(linear_element(vec, u));
        }
    }
    let n_v = pending.len();
    for c in &v.complement {
        pending.push(linear_element(c, u));
    }
    let mut coords = Vec::new();
    let mut pos = 0;
    for item in &v.items {
        let chart_item = match item {
            SymplecticItem::EvenPair(..) => {
                let f = pending[pos].with_order(work, u);
                let g = even_correct(a, &f, &pending[pos + 1], n, work)?;
                pos += 2;
                ChartItem::EvenPair(f, g)
            }
            SymplecticItem::OddSelf(_) => {
                let h = odd_normalize(a, &pending[pos], None, work)?;
                pos += 1;
                ChartItem::OddSelf(h)
            }
            SymplecticItem::OddPair(..) => {
                let (f, g) = odd_pair_flatten(a, &pending[pos], &pending[pos + 1], work)?;
                pos += 2;
                ChartItem::OddPair(f, g)
            }
        };
        for x in pending.iter_mut().skip(pos) {
            *x = project_onto(a, &chart_item, x, work)?;
        }
        coords.push(chart_item);
    }
    debug_assert_eq!(pos, n_v);
    let centralizer = pending.split_off(n_v);
    Ok(DarbouxChart { coords, centralizer, order: n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poisson::{BracketTable, PoissonAlgebra};
    use crate::rational::{q, qf};
    use crate::supercore::{SuperPoly, Universe};

    fn skew_plane() -> PoissonAlgebra {
        let u = Universe::from_spec(&[("x", Parity::Even, 0), ("y", Parity::Even, 0)]);
        let mut t = BracketTable::new();
        t.set(0, 1, SuperPoly::one(2).add(&SuperPoly::var(2, 0)), &u);
        PoissonAlgebra::new(u, t, 0).unwrap()
    }

    #[test]
    fn even_correct_inverts_the_bracket() {
        let a = skew_plane();
        let u = a.universe().clone();
        let x = TS::var(0, &u);
        let y = TS::var(1, &u);
        let g = even_correct(&a, &x, &y, 4, 5).unwrap();
        let mut want = SuperPoly::zero();
        for k in 0..=4 {
            let mut m = crate::supercore::Monomial::var(2, 1);
            m.set_exp(0, k);
            want.add_term(m, if k % 2 == 0 { q(1) } else { q(-1) });
        }
        assert_eq!(g.poly, want);
    }

    #[test]
    fn odd_normalize_square_root() {
        let u = Universe::from_spec(&[("x", Parity::Even, 0), ("t", Parity::Odd, 0)]);
        let mut t = BracketTable::new();
        t.set(1, 1, SuperPoly::one(2).add(&SuperPoly::var(2, 0)), &u);
        let a = PoissonAlgebra::new(u.clone(), t, 0).unwrap();
        let h = odd_normalize(&a, &TS::var(1, &u), None, 4).unwrap();
        let x = crate::supercore::Monomial::var(2, 0);
        let mut tx = crate::supercore::Monomial::var(2, 1);
        assert_eq!(h.poly.coeff(&tx), q(1));
        tx.set_exp(0, 1);
        assert_eq!(h.poly.coeff(&tx), qf(-1, 2));
        tx.set_exp(0, 2);
        assert_eq!(h.poly.coeff(&tx), qf(3, 8));
        assert!(h.poly.coeff(&x).is_zero());
    }
}
