use num_traits::Zero;
use std::collections::{BTreeMap, HashMap};

use super::algebra::LieSuperalgebraData;
use super::grading::WSetup;
use super::span::PolySpan;
use crate::error::Result;
use crate::linalg;
use crate::rational::Q;
use crate::starprod::{specialize_hbar, StarAlgebra};
use crate::supercore::{Monomial, Parity, SuperPoly, Universe};

/// The enveloping algebra in shifted coordinates, with the quotient by `I_chi`.
///
/// Elements of `U` are normal-ordered polynomials on the star universe with no `hbar`;
/// since `m` sits last in the basis, reducing modulo `I_chi` drops every monomial with
/// an `m` factor.
#[derive(Debug, Clone)]
pub struct WContext {
    pub setup: WSetup,
    pub star: StarAlgebra,
}

impl WContext {
    pub fn new(g: &LieSuperalgebraData, alternate: bool) -> Result<Self> {
        let setup = WSetup::new(g, alternate)?;
        let star = setup.star()?;
        Ok(WContext { setup, star })
    }

    /// Star universe: adapted basis plus `hbar`.
    pub fn universe(&self) -> &Universe {
        self.star.universe()
    }

    pub fn var(&self, k: usize) -> SuperPoly {
        SuperPoly::var(self.universe().len(), k)
    }

    /// Sets `hbar = 1`.
    pub fn at_one(&self, p: &SuperPoly) -> SuperPoly {
        specialize_hbar(p, self.star.hbar(), 1)
    }

    /// Normal form in `U / I_chi`.
    pub fn reduce(&self, p: &SuperPoly) -> SuperPoly {
        let nc = self.setup.n_complement;
        let n = self.setup.len();
        self.at_one(p).filter(|m| (nc..n).all(|k| m.exp(k) == 0))
    }

    /// Product in `U`.
    pub fn umul(&self, a: &SuperPoly, b: &SuperPoly) -> SuperPoly {
        self.at_one(&self.star.star_poly(a, b, u32::MAX))
    }

    /// Product of invariant representatives in `U / I_chi`.
    pub fn wmul(&self, a: &SuperPoly, b: &SuperPoly) -> SuperPoly {
        self.reduce(&self.star.star_poly(a, b, u32::MAX))
    }

    /// `(a - chi(a)) y mod I_chi` for every basis vector `a` of `m`.
    pub fn invariance_defects(&self, y: &SuperPoly) -> Vec<SuperPoly> {
        self.setup.m_indices().into_iter().map(|a| self.wmul(&self.var(a), y)).collect()
    }

    pub fn is_invariant(&self, y: &SuperPoly) -> bool {
        self.invariance_defects(y).iter().all(|d| d.is_zero())
    }

    /// Kazhdan degree: the largest weight of a monomial.
    pub fn degree(&self, p: &SuperPoly) -> Option<i32> {
        let u = self.universe();
        p.terms().map(|(m, _)| m.weight(u)).max()
    }

    /// PBW monomials in the complement of `m` of Kazhdan weight at most `n`, by weight then id order.
    pub fn complement_monomials(&self, n: i32) -> Vec<Monomial> {
        let u = self.universe();
        let len = u.len();
        let nc = self.setup.n_complement;
        let mut out = Vec::new();
        let mut cur = vec![0u16; len];
        fn rec(u: &Universe, nc: usize, i: usize, left: i32, cur: &mut Vec<u16>, out: &mut Vec<Monomial>) {
            if i == nc {
                out.push(Monomial::from_exponents(cur));
                return;
            }
            let w = u.weight(i).max(1);
            let max = if u.is_odd(i) { 1 } else { (left / w) as u16 };
            for e in 0..=max {
                if e as i32 * w > left {
                    break;
                }
                cur[i] = e;
                rec(u, nc, i + 1, left - e as i32 * w, cur, out);
            }
            cur[i] = 0;
        }
        if n >= 0 {
            rec(u, nc, 0, n, &mut cur, &mut out);
        }
        out.sort_by(|a, b| a.weight(u).cmp(&b.weight(u)).then_with(|| a.cmp(b)));
        out
    }
}

/// A generator of the W-algebra: a PBW normal form in `U / I_chi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WGenerator {
    pub weight: i32,
    pub parity: Parity,
    pub lift: SuperPoly,
}

/// Filtered presentation of the W-algebra through Kazhdan degree `order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WPresentation {
    pub method: &'static str,
    pub order: u32,
    pub generators: Vec<WGenerator>,
    /// `dim F_n` for `n = 0..=order`.
    pub filtered_dims: Vec<usize>,
    /// `(i, j, g_i g_j)` for `i <= j`.
    pub products: Vec<(usize, usize, SuperPoly)>,
}

impl WPresentation {
    pub fn weights(&self) -> Vec<i32> {
        self.generators.iter().map(|g| g.weight).collect()
    }

    /// Even weights then odd weights, each sorted descending.
    pub fn weight_signature(&self) -> (Vec<i32>, Vec<i32>) {
        let mut even: Vec<i32> = self.generators.iter().filter(|g| !g.parity.is_odd()).map(|g| g.weight).collect();
        let mut odd: Vec<i32> = self.generators.iter().filter(|g| g.parity.is_odd()).map(|g| g.weight).collect();
        even.sort_unstable_by(|a, b| b.cmp(a));
        odd.sort_unstable_by(|a, b| b.cmp(a));
        (even, odd)
    }
}

/// Ordered monomials in generators, odd exponents at most one, of total weight `<= n`.
pub fn generator_monomials(weights: &[i32], parities: &[Parity], n: i32) -> Vec<Vec<u16>> {
    fn rec(w: &[i32], p: &[Parity], i: usize, left: i32, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if i == w.len() {
            out.push(cur.clone());
            return;
        }
        let wi = w[i].max(1);
        let max = if p[i].is_odd() { 1 } else { (left / wi) as u16 };
        for e in 0..=max {
            if e as i32 * wi > left {
                break;
            }
            cur[i] = e;
            rec(w, p, i + 1, left - e as i32 * wi, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    if n >= 0 {
        rec(weights, parities, 0, n, &mut vec![0; weights.len()], &mut out);
    }
    out
}

/// Evaluates ordered generator monomials by left-to-right products in `U / I_chi`.
#[derive(Debug, Default)]
pub struct MonomialEvaluator {
    cache: HashMap<Vec<u16>, SuperPoly>,
}

impl MonomialEvaluator {
    pub fn eval(&mut self, ctx: &WContext, gens: &[SuperPoly], exps: &[u16]) -> SuperPoly {
        if let Some(p) = self.cache.get(exps) {
            return p.clone();
        }
        let out = match exps.iter().rposition(|&e| e > 0) {
            None => SuperPoly::one(ctx.universe().len()),
            Some(last) => {
                let mut prev = exps.to_vec();
                prev[last] -= 1;
                let left = self.eval(ctx, gens, &prev);
                ctx.wmul(&left, &gens[last])
            }
        };
        self.cache.insert(exps.to_vec(), out.clone());
        out
    }
}

/// Span of all generator monomials of weight at most `n`.
pub fn generated_span(ctx: &WContext, gens: &[WGenerator], n: i32, ev: &mut MonomialEvaluator) -> PolySpan {
    let w: Vec<i32> = gens.iter().map(|g| g.weight).collect();
    let p: Vec<Parity> = gens.iter().map(|g| g.parity).collect();
    let lifts: Vec<SuperPoly> = gens.iter().map(|g| g.lift.clone()).collect();
    let mut span = PolySpan::new();
    for exps in generator_monomials(&w, &p, n) {
        span.insert(&ev.eval(ctx, &lifts, &exps));
    }
    span
}

/// Pairwise products `g_i g_j` with `i <= j`.
pub fn generator_products(ctx: &WContext, gens: &[SuperPoly]) -> Vec<(usize, usize, SuperPoly)> {
    let mut out = Vec::new();
    for i in 0..gens.len() {
        for j in i..gens.len() {
            out.push((i, j, ctx.wmul(&gens[i], &gens[j])));
        }
    }
    out
}

/// Invariants of `U / I_chi` by exact linear algebra on complement PBW monomials.
pub fn whittaker_walgebra(ctx: &WContext, order: u32) -> Result<WPresentation> {
    let n_max = order as i32;
    let basis = ctx.complement_monomials(n_max);
    let u = ctx.universe();
    // Invariance defects of each basis monomial, keyed by (m index, result monomial).
    let defects: Vec<Vec<SuperPoly>> =
        basis.iter().map(|m| ctx.invariance_defects(&SuperPoly::monomial(m.clone(), Q::from_integer(1.into())))).collect();
    let mut gens: Vec<WGenerator> = Vec::new();
    let mut dims = Vec::new();
    let mut ev = MonomialEvaluator::default();
    for d in 0..=n_max {
        let cols: Vec<usize> = (0..basis.len()).filter(|&i| basis[i].weight(u) <= d).collect();
        let mut row_index: BTreeMap<(usize, Monomial), usize> = BTreeMap::new();
        for &c in &cols {
            for (a, p) in defects[c].iter().enumerate() {
                for (m, _) in p.terms() {
                    let next = row_index.len();
                    row_index.entry((a, m.clone())).or_insert(next);
                }
            }
        }
        let mut mat = linalg::zeros(row_index.len(), cols.len());
        for (k, &c) in cols.iter().enumerate() {
            for (a, p) in defects[c].iter().enumerate() {
                for (m, v) in p.terms() {
                    mat[row_index[&(a, m.clone())]][k] = v.clone();
                }
            }
        }
        let null = if row_index.is_empty() {
            (0..cols.len()).map(|k| (0..cols.len()).map(|j| Q::from_integer(((j == k) as i64).into())).collect()).collect()
        } else {
            linalg::nullspace(&mat, cols.len())
        };
        dims.push(null.len());
        let mut span = generated_span(ctx, &gens, d, &mut ev);
        for v in null {
            let mut y = SuperPoly::zero();
            for (k, c) in v.iter().enumerate() {
                if !c.is_zero() {
                    y.add_term(basis[cols[k]].clone(), c.clone());
                }
            }
            if span.insert(&y) {
                let parity = y.parities(u).first().copied().unwrap_or(Parity::Even);
                let weight = ctx.degree(&y).unwrap_or(0);
                gens.push(WGenerator { weight, parity, lift: y });
                ev = MonomialEvaluator::default();
            }
        }
    }
    let lifts: Vec<SuperPoly> = gens.iter().map(|g| g.lift.clone()).collect();
    let products = generator_products(ctx, &lifts);
    Ok(WPresentation { method: "whittaker", order, generators: gens, filtered_dims: dims, products })
}
