use num_traits::Zero;

use super::whittaker::{generator_products, WContext, WGenerator, WPresentation};
use crate::darboux::DarbouxChart;
use crate::error::{Error, Result};
use crate::poisson::{slice_subspace, PoissonBivector, SymplecticSubspace};
use crate::rational::Q;
use crate::starprod::{cx_finite_part, quantum_darboux, FinitePart};
use crate::supercore::{Parity, SuperPoly, TruncatedSeries};

/// Quantum Darboux slice along `V = m ⊕ m*` and the map of its centralizer into `U / I_chi`.
#[derive(Debug, Clone)]
pub struct SliceData {
    pub pi: PoissonBivector,
    pub subspace: SymplecticSubspace,
    pub chart: DarbouxChart,
    pub finite: FinitePart,
    /// Working precision of the chart.
    pub work: u32,
}

/// Constant part of the shifted bracket, i.e. `chi([x, y])`.
pub fn bivector_at_chi(ctx: &WContext) -> Result<PoissonBivector> {
    let p = ctx.setup.poisson()?;
    p.bivector_at(&vec![Q::zero(); ctx.setup.len()])
}

pub fn slice_chart(ctx: &WContext, order: u32, guard: u32) -> Result<SliceData> {
    let pi = bivector_at_chi(ctx)?;
    let subspace = slice_subspace(&pi, &ctx.setup.m_indices())?;
    let work = order + guard;
    let chart = quantum_darboux(&ctx.star, &subspace, order, work)?;
    let finite = cx_finite_part(&chart.centralizer, order, ctx.universe())?;
    Ok(SliceData { pi, subspace, chart, finite, work })
}

/// Image of a centralizer element: `hbar = 1`, then reduction modulo `I_chi`.
///
/// Complement monomials have adic order at most their weight, so the image is exact
/// when the precision reaches the weight.
pub fn slice_image(ctx: &WContext, z: &TruncatedSeries) -> Result<SuperPoly> {
    let u = ctx.universe();
    let w = match z.poly.weights(u).as_slice() {
        [] => return Ok(SuperPoly::zero()),
        [w] => *w,
        ws => return Err(Error::NotHomogeneous(ws.to_vec())),
    };
    if w < 0 || (z.order as i64) < w as i64 {
        return Err(Error::InsufficientPrecision { have: z.order, need: w.max(0) as u32 });
    }
    Ok(ctx.reduce(&z.poly))
}

/// W-algebra through the slice: centralizer generators of weight `<= order` mapped into `U / I_chi`.
pub fn slice_walgebra(ctx: &WContext, order: u32, guard: u32) -> Result<(WPresentation, SliceData)> {
    let data = slice_chart(ctx, order, guard)?;
    let u = ctx.universe();
    let mut generators = Vec::new();
    for z in &data.chart.centralizer {
        let weight = z.poly.weights(u).first().copied().unwrap_or(0);
        if weight > order as i32 {
            continue;
        }
        let lift = slice_image(ctx, z)?;
        let parity = z.parity(u).unwrap_or(Parity::Even);
        generators.push(WGenerator { weight, parity, lift });
    }
    let filtered_dims = data.finite.filtered_dims();
    let lifts: Vec<SuperPoly> = generators.iter().map(|g| g.lift.clone()).collect();
    let products = generator_products(ctx, &lifts);
    Ok((WPresentation { method: "slice", order, generators, filtered_dims, products }, data))
}
