use num_traits::Zero;

use super::slice::{bivector_at_chi, slice_image, slice_walgebra};
use super::whittaker::{generated_span, MonomialEvaluator, WContext};
use crate::darboux::{DarbouxChart, Residual};
use crate::error::Result;
use crate::linalg;
use crate::poisson::{slice_subspace, BracketAlgebra, SymplecticItem, SymplecticSubspace};
use crate::rational::Q;
use crate::starprod::{cx_finite_part, monomial_counts, quantum_darboux, StarAlgebra};
use crate::supercore::{Parity, SuperPoly, TruncatedSeries};

type TS = TruncatedSeries;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliffordReport {
    pub order: u32,
    /// Filtered dimensions of the slice along the even part `V_0` of `V`.
    pub dims_a_dagger: Vec<usize>,
    /// Counts for `S[(g_0)_e]` tensor the exterior algebra on the odd part of `g`.
    pub dims_gr_expected: Vec<usize>,
    /// Counts for `Cl(V_1)` tensor `W`.
    pub dims_cl_w: Vec<usize>,
    pub chart_residuals: Vec<Residual>,
    pub w0_generators: usize,
    /// Embedded generators of the even-part W-algebra that fail to commute with `V_0`.
    pub w0_not_central: Vec<String>,
    /// Generator pairs whose embedded product differs from the embedding of the product.
    pub w0_product_mismatches: Vec<(usize, usize)>,
    /// Generator pairs whose product leaves the span of generator monomials.
    pub w0_products_open: Vec<(usize, usize)>,
}

impl CliffordReport {
    pub fn ok(&self) -> bool {
        self.dims_a_dagger == self.dims_gr_expected
            && self.dims_a_dagger == self.dims_cl_w
            && self.chart_residuals.is_empty()
            && self.w0_not_central.is_empty()
            && self.w0_product_mismatches.is_empty()
            && self.w0_products_open.is_empty()
    }
}

/// Kazhdan weight of a vector with homogeneous support.
fn vector_weight(ctx: &WContext, v: &[Q]) -> i32 {
    let i = v.iter().position(|c| !c.is_zero()).unwrap_or(0);
    ctx.setup.weights[i]
}

/// Kazhdan weights of a basis of the centralizer of `e` in the even part.
fn even_centralizer_weights(ctx: &WContext) -> Vec<i32> {
    let g = &ctx.setup.adapted;
    let Some([e, _, _]) = &g.triple else {
        return (0..g.len()).filter(|&i| !g.parities[i].is_odd()).map(|i| ctx.setup.weights[i]).collect();
    };
    let mut out = Vec::new();
    let mut ws: Vec<i32> = ctx.setup.weights.clone();
    ws.sort_unstable();
    ws.dedup();
    for w in ws {
        let src: Vec<usize> = (0..g.len()).filter(|&i| !g.parities[i].is_odd() && ctx.setup.weights[i] == w).collect();
        if src.is_empty() {
            continue;
        }
        let m: linalg::Matrix = (0..g.len())
            .map(|t| src.iter().map(|&s| g.bracket(e, &g.unit(s))[t].clone()).collect())
            .collect();
        let nullity = src.len() - linalg::rank(&m);
        out.extend(std::iter::repeat_n(w, nullity));
    }
    out
}

/// Re-expresses a polynomial of one star algebra in another by matching variable names,
/// multiplying factors in the source order.
fn embed(p: &SuperPoly, from: &StarAlgebra, to: &StarAlgebra) -> SuperPoly {
    let fu = from.universe();
    let tu = to.universe();
    let map: Vec<usize> = (0..fu.len()).map(|i| tu.find(&fu.var(i).name).expect("variable present")).collect();
    let mut out = SuperPoly::zero();
    for (m, c) in p.terms() {
        let mut acc = SuperPoly::one(tu.len());
        for (i, &e) in m.exponents().iter().enumerate() {
            for _ in 0..e {
                acc = to.star_poly(&acc, &SuperPoly::var(tu.len(), map[i]), u32::MAX);
            }
        }
        out.add_assign(&acc.scale(c));
    }
    out
}

fn even_items(sub: &SymplecticSubspace) -> SymplecticSubspace {
    let mut items = Vec::new();
    let mut complement = Vec::new();
    for it in &sub.items {
        match it {
            SymplecticItem::EvenPair(..) => items.push(it.clone()),
            _ => complement.extend(it.vectors().into_iter().cloned()),
        }
    }
    complement.extend(sub.complement.iter().cloned());
    SymplecticSubspace { items, complement }
}

/// Checks the factorization of the slice along the even part of `V`.
pub fn clifford_factorization(ctx: &WContext, order: u32, guard: u32) -> Result<CliffordReport> {
    let s = &ctx.star;
    let u = s.universe();
    let work = order + guard;
    let pi = bivector_at_chi(ctx)?;
    let sub = slice_subspace(&pi, &ctx.setup.m_indices())?;
    let v0 = even_items(&sub);
    let chart: DarbouxChart = quantum_darboux(s, &v0, order, work)?;
    let chart_residuals = chart.residuals(s);
    let dims_a_dagger = cx_finite_part(&chart.centralizer, order, u)?.filtered_dims();

    let n = order as usize;
    let cum = |c: Vec<usize>| -> Vec<usize> {
        c.into_iter()
            .scan(0, |acc, d| {
                *acc += d;
                Some(*acc)
            })
            .collect()
    };
    let mut gr_w = even_centralizer_weights(ctx);
    let mut gr_p = vec![Parity::Even; gr_w.len()];
    for i in 0..ctx.setup.len() {
        if ctx.setup.adapted.parities[i].is_odd() {
            gr_w.push(ctx.setup.weights[i]);
            gr_p.push(Parity::Odd);
        }
    }
    let dims_gr_expected = cum(monomial_counts(&gr_w, &gr_p, n));

    let (_, wdata) = slice_walgebra(ctx, order, guard)?;
    let mut cw = wdata.finite.weights.clone();
    let mut cp = wdata.finite.parities.clone();
    for it in &sub.items {
        if !matches!(it, SymplecticItem::EvenPair(..)) {
            for v in it.vectors() {
                cw.push(vector_weight(ctx, v));
                cp.push(Parity::Odd);
            }
        }
    }
    let dims_cl_w = cum(monomial_counts(&cw, &cp, n));

    // Even-part W-algebra, embedded.
    let ctx0 = WContext::new(&ctx.setup.original.even_part(), false)?;
    let (w0, data0) = slice_walgebra(&ctx0, order, guard)?;
    let zs0: Vec<&TS> = data0
        .chart
        .centralizer
        .iter()
        .filter(|z| z.poly.weights(ctx0.universe()).first().is_none_or(|&w| w <= order as i32))
        .collect();
    let emb: Vec<TS> = zs0.iter().map(|z| TS::new(embed(&z.poly, &ctx0.star, s), z.order, u)).collect();
    let mut w0_not_central = Vec::new();
    for (i, z) in emb.iter().enumerate() {
        for c in chart.coordinate_elements() {
            let ok = match s.bracket(z, c) {
                Ok(b) => b.poly.truncate(u, order).is_zero() && b.order >= order,
                Err(_) => false,
            };
            if !ok {
                w0_not_central.push(format!("W0 generator {i} vs {}", c.render(u)));
            }
        }
    }
    let mut w0_product_mismatches = Vec::new();
    let mut w0_products_open = Vec::new();
    let mut ev = MonomialEvaluator::default();
    let span = generated_span(&ctx0, &w0.generators, order as i32, &mut ev);
    for i in 0..emb.len() {
        for j in i..emb.len() {
            let p0 = ctx0.star.star_mul(zs0[i], zs0[j]);
            let lhs = TS::new(embed(&p0.poly, &ctx0.star, s), p0.order, u);
            let rhs = s.star_mul(&emb[i], &emb[j]);
            let cap = order.min(lhs.order).min(rhs.order);
            if !lhs.agrees_through(&rhs, cap, u) {
                w0_product_mismatches.push((i, j));
            }
            let wi = w0.generators[i].weight + w0.generators[j].weight;
            if wi <= order as i32 {
                match slice_image(&ctx0, &p0) {
                    Ok(y) if span.contains(&y) => {}
                    _ => w0_products_open.push((i, j)),
                }
            }
        }
    }
    Ok(CliffordReport {
        order,
        dims_a_dagger,
        dims_gr_expected,
        dims_cl_w,
        chart_residuals,
        w0_generators: emb.len(),
        w0_not_central,
        w0_product_mismatches,
        w0_products_open,
    })
}
