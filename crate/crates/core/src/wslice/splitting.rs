use super::slice::{slice_image, SliceData};
use super::whittaker::WContext;
use crate::darboux::{even_decompose, odd_pair_decompose, odd_split_project, ChartItem};
use crate::error::{Error, Result};
use crate::poisson::BracketAlgebra;
use crate::starprod::StarAlgebra;
use crate::supercore::{Monomial, SuperPoly, TruncatedSeries, Universe};

type TS = TruncatedSeries;

/// A monomial whose factorization does not reproduce it modulo `U m'^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitFailure {
    pub monomial: String,
    pub residual: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplittingReport {
    pub order: u32,
    pub depth: u32,
    pub monomials: usize,
    pub components: usize,
    pub failures: Vec<SplitFailure>,
    /// Centralizer components whose image in `U / I_chi` is not invariant.
    pub components_not_invariant: Vec<String>,
    /// Components too imprecise to map; they are still used in the residual.
    pub components_unmapped: usize,
}

impl SplittingReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty() && self.components_not_invariant.is_empty()
    }
}

fn lmul(s: &StarAlgebra, a: &TS, b: &TS, work: u32) -> Result<TS> {
    Ok(BracketAlgebra::mul(s, a, b)?.with_order(work, s.universe()))
}

/// Reassembles the factorization of `x` along the chart, keeping only terms of
/// total `m`-degree below `k`; every centralizer component is pushed to `comps`.
fn split(s: &StarAlgebra, items: &[ChartItem], x: &TS, k: u32, work: u32, comps: &mut Vec<TS>) -> Result<TS> {
    let u = s.universe();
    let Some((item, rest)) = items.split_first() else {
        comps.push(x.clone());
        return Ok(x.clone());
    };
    let mut out = TS::zero();
    match item {
        ChartItem::EvenPair(f, g) => {
            for ((i, j), b) in even_decompose(s, x, f, g, work)? {
                if j >= k {
                    continue;
                }
                let mut m = split(s, rest, &b, k - j, work, comps)?;
                for _ in 0..j {
                    m = lmul(s, f, &m, work)?;
                }
                for _ in 0..i {
                    m = lmul(s, g, &m, work)?;
                }
                out = out.add(&m, u);
            }
        }
        ChartItem::OddPair(f, g) => {
            // f g = hbar^2 - g f, so x = (b0 + g bg + hbar^2 bfg) + (f bf - g f bfg),
            // and the second group lies in the left ideal generated by f.
            let p = odd_pair_decompose(s, x, f, g, work)?;
            out = out.add(&split(s, rest, &p.b0, k, work, comps)?, u);
            let bg = split(s, rest, &p.bg, k, work, comps)?;
            out = out.add(&lmul(s, g, &bg, work)?, u);
            let h2 = TS::exact(s.hbar_power(2));
            let bfg0 = split(s, rest, &p.bfg, k, work, comps)?;
            out = out.add(&lmul(s, &h2, &bfg0, work)?, u);
            if k > 1 {
                let bf = split(s, rest, &p.bf, k - 1, work, comps)?;
                out = out.add(&lmul(s, f, &bf, work)?, u);
                let bfg1 = split(s, rest, &p.bfg, k - 1, work, comps)?;
                out = out.sub(&lmul(s, g, &lmul(s, f, &bfg1, work)?, work)?, u);
            }
        }
        ChartItem::OddSelf(h) => {
            let (b0, b1) = odd_split_project(s, x, h, work)?;
            out = out.add(&split(s, rest, &b0, k, work, comps)?, u);
            let b1 = split(s, rest, &b1, k, work, comps)?;
            out = out.add(&lmul(s, h, &b1, work)?, u);
        }
    }
    Ok(out)
}

/// PBW monomials in the adapted basis of Kazhdan weight `<= n` and `m`-degree `<= k`.
pub fn pbw_monomials(ctx: &WContext, n: i32, k: u32) -> Vec<Monomial> {
    fn rec(ctx: &WContext, u: &Universe, i: usize, w_left: i32, k_left: u32, cur: &mut Vec<u16>, out: &mut Vec<Monomial>) {
        if i == ctx.setup.len() {
            out.push(Monomial::from_exponents(cur));
            return;
        }
        let w = u.weight(i);
        let is_m = ctx.setup.is_m(i);
        let mut e = 0u16;
        loop {
            let used_w = e as i32 * w;
            if used_w > w_left || (is_m && e as u32 > k_left) || (u.is_odd(i) && e > 1) {
                break;
            }
            if !is_m && w <= 0 && e > 0 {
                break;
            }
            cur[i] = e;
            rec(ctx, u, i + 1, w_left - used_w, if is_m { k_left - e as u32 } else { k_left }, cur, out);
            e += 1;
        }
        cur[i] = 0;
    }
    let u = ctx.universe();
    let mut out = Vec::new();
    let mut cur = vec![0u16; u.len()];
    rec(ctx, u, 0, n, k, &mut cur, &mut out);
    out
}

/// Drops monomials of `m`-degree at least `k`: normal form modulo the left ideal `U m'^k`.
pub fn reduce_mod_power(ctx: &WContext, p: &SuperPoly, k: u32) -> SuperPoly {
    let nc = ctx.setup.n_complement;
    let n = ctx.setup.len();
    ctx.at_one(p).filter(|m| (nc..n).map(|i| m.exp(i) as u32).sum::<u32>() < k)
}

/// Factorizes every PBW monomial of weight `<= n` along the slice chart and checks
/// that the part of `m`-degree `< k` reproduces it modulo `U m'^k`.
pub fn splitting_check(ctx: &WContext, data: &SliceData, n: u32, k: u32) -> Result<SplittingReport> {
    let s = &ctx.star;
    let u = ctx.universe();
    let work = data.work;
    let need = n + k.saturating_sub(1);
    if work < need {
        return Err(Error::InsufficientPrecision { have: work, need });
    }
    let monos = pbw_monomials(ctx, n as i32, k);
    let mut failures = Vec::new();
    let mut components = 0;
    let mut components_not_invariant = Vec::new();
    let mut components_unmapped = 0;
    for m in &monos {
        let x = TS::new(SuperPoly::monomial(m.clone(), crate::rational::Q::from_integer(1.into())), work, u);
        let mut comps = Vec::new();
        let rebuilt = split(s, &data.chart.coords, &x, k, work, &mut comps)?;
        if rebuilt.order < need {
            return Err(Error::InsufficientPrecision { have: rebuilt.order, need });
        }
        let residual = reduce_mod_power(ctx, &x.sub(&rebuilt, u).poly, k);
        if !residual.is_zero() {
            failures.push(SplitFailure { monomial: m.render(u), residual: residual.render(u) });
        }
        for c in comps.iter().filter(|c| !c.poly.truncate(u, need).is_zero()) {
            components += 1;
            match slice_image(ctx, c) {
                Ok(y) => {
                    if !ctx.is_invariant(&y) {
                        components_not_invariant.push(format!("{}: {}", m.render(u), y.render(u)));
                    }
                }
                Err(_) => components_unmapped += 1,
            }
        }
    }
    Ok(SplittingReport {
        order: n,
        depth: k,
        monomials: monos.len(),
        components,
        failures,
        components_not_invariant,
        components_unmapped,
    })
}
