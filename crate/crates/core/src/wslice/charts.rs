use num_traits::Zero;

use super::whittaker::WContext;
use crate::darboux::{equivariant_darboux, DarbouxChart, Residual};
use crate::error::Result;
use crate::poisson::{find_symplectic_subspace, PoissonAlgebra, PoissonBivector, SymplecticSubspace};
use crate::rational::Q;
use crate::starprod::{chart_at_hbar_zero, quantum_darboux};

/// A Darboux chart at `chi` on the maximal symplectic subspace, with its verification.
#[derive(Debug, Clone)]
pub struct ChartRun {
    pub pi: PoissonBivector,
    pub subspace: SymplecticSubspace,
    pub chart: DarbouxChart,
    pub residuals: Vec<Residual>,
    pub inhomogeneous: Vec<(String, Vec<i32>)>,
}

impl ChartRun {
    pub fn ok(&self) -> bool {
        self.residuals.is_empty() && self.inhomogeneous.is_empty()
    }
}

fn symplectic_at_chi(ctx: &WContext) -> Result<(PoissonAlgebra, PoissonBivector, SymplecticSubspace)> {
    let p = ctx.setup.poisson()?;
    let pi = p.bivector_at(&vec![Q::zero(); ctx.setup.len()])?;
    let v = find_symplectic_subspace(&pi)?;
    Ok((p, pi, v))
}

/// Classical chart of the shifted Lie–Poisson algebra through order `order`.
pub fn classical_chart(ctx: &WContext, order: u32, guard: u32) -> Result<ChartRun> {
    let (p, pi, subspace) = symplectic_at_chi(ctx)?;
    let chart = equivariant_darboux(&p, &subspace, order, order + guard)?;
    let residuals = chart.residuals(&p);
    let inhomogeneous = chart.inhomogeneous(&p);
    Ok(ChartRun { pi, subspace, chart, residuals, inhomogeneous })
}

/// Quantum chart of the homogenized enveloping algebra; relations are `[a, b] / hbar^2`.
pub fn quantum_chart(ctx: &WContext, order: u32, guard: u32) -> Result<ChartRun> {
    let (_, pi, subspace) = symplectic_at_chi(ctx)?;
    let chart = quantum_darboux(&ctx.star, &subspace, order, order + guard)?;
    let residuals = chart.residuals(&ctx.star);
    let inhomogeneous = chart.inhomogeneous(&ctx.star);
    Ok(ChartRun { pi, subspace, chart, residuals, inhomogeneous })
}

/// Residuals of the `hbar = 0` part of a quantum chart, checked with the classical bracket.
pub fn classical_limit_residuals(ctx: &WContext, quantum: &ChartRun) -> Result<Vec<Residual>> {
    let p = ctx.setup.poisson()?;
    let limit = chart_at_hbar_zero(&quantum.chart, &ctx.star, p.universe());
    Ok(limit.residuals(&p))
}
