//! JSON reports for every pipeline. Keys are sorted, so equal inputs give identical bytes.
//!
//! Every report is computed at `compute` order and rendered at `render <= compute`;
//! rendering at a lower order is how truncation stability is checked.

use serde_json::{json, Value};

use crate::darboux::{ChartItem, DarbouxChart, Residual};
use crate::error::Result;
use crate::rational::format_rational;
use crate::supercore::{SuperPoly, TruncatedSeries, Universe};
use crate::wslice::{
    classical_chart, classical_limit_residuals, clifford_factorization, compare_realizations, perturbation_detected,
    quantum_chart, slice_walgebra, splitting_check, whittaker_walgebra, ChartRun, Comparison, LieSuperalgebraData,
    WContext, WPresentation,
};

/// Which W-algebra construction to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Whittaker,
    Slice,
    Both,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Whittaker => "whittaker",
            Method::Slice => "slice",
            Method::Both => "both",
        }
    }
}

/// A report with its verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub value: Value,
    pub pass: bool,
}

impl Report {
    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.value).expect("json values serialize");
        s.push('\n');
        s
    }
}

pub fn poly_terms(p: &SuperPoly, u: &Universe) -> Value {
    Value::Array(
        p.terms()
            .map(|(m, c)| json!({ "monomial": m.render(u), "coeff": format_rational(c) }))
            .collect(),
    )
}

fn series_json(x: &TruncatedSeries, order: u32, u: &Universe) -> Value {
    let p = x.poly.truncate(u, order);
    json!({ "text": p.render(u), "terms": poly_terms(&p, u), "weights": p.weights(u) })
}

fn residuals_json(rs: &[Residual]) -> Value {
    Value::Array(rs.iter().map(|r| json!({ "relation": r.label, "residual": r.residual })).collect())
}

fn chart_json(chart: &DarbouxChart, order: u32, u: &Universe) -> Value {
    let coords: Vec<Value> = chart
        .coords
        .iter()
        .map(|c| {
            let kind = match c {
                ChartItem::EvenPair(..) => "even_pair",
                ChartItem::OddSelf(_) => "odd_self",
                ChartItem::OddPair(..) => "odd_pair",
            };
            let els: Vec<Value> = c.elements().iter().map(|x| series_json(x, order, u)).collect();
            json!({ "kind": kind, "elements": els })
        })
        .collect();
    let cent: Vec<Value> = chart.centralizer.iter().map(|x| series_json(x, order, u)).collect();
    json!({ "coordinates": coords, "centralizer": cent })
}

fn chart_run_json(run: &ChartRun, order: u32, u: &Universe) -> Value {
    let (ve, vo) = run.subspace.dims();
    json!({
        "v_dims": [ve, vo],
        "chart": chart_json(&run.chart, order, u),
        "residuals": residuals_json(&run.residuals),
        "inhomogeneous": run.inhomogeneous.iter().map(|(l, w)| json!({ "element": l, "weights": w })).collect::<Vec<_>>(),
    })
}

/// Structural validation of an algebra document, with the failing basis triples located,
/// plus Jacobi of its shifted Lie–Poisson bracket through `order`.
pub fn check_report(g: &LieSuperalgebraData, order: u32) -> Report {
    let validation = g.validate();
    let mut value = json!({
        "algebra": g.name,
        "dims": [g.dims().0, g.dims().1],
        "validation": match &validation { Ok(()) => "ok".to_string(), Err(e) => e.to_string() },
        "jacobi_violations": g.jacobi_violations(),
    });
    let mut pass = validation.is_ok();
    if pass {
        match WContext::new(g, false).and_then(|c| c.setup.poisson()) {
            Ok(p) => {
                let v = p.check_jacobi(order);
                pass &= v.is_empty();
                value["poisson_jacobi_violations"] = Value::Array(
                    v.iter().map(|j| json!({ "triple": j.triple, "residual": j.residual })).collect(),
                );
            }
            Err(e) => {
                pass = false;
                value["setup_error"] = json!(e.to_string());
            }
        }
    }
    value["pass"] = json!(pass);
    Report { value, pass }
}

/// Classical and quantum Darboux charts at `chi` on the maximal symplectic subspace.
pub fn darboux_report(g: &LieSuperalgebraData, compute: u32, render: u32, guard: u32) -> Result<Report> {
    let ctx = WContext::new(g, false)?;
    let p = ctx.setup.poisson()?;
    let classical = classical_chart(&ctx, compute, guard)?;
    let quantum = quantum_chart(&ctx, compute, guard)?;
    let limit = classical_limit_residuals(&ctx, &quantum)?;
    let pass = classical.ok() && quantum.ok() && limit.is_empty();
    let value = json!({
        "algebra": g.name,
        "order": render,
        "basis": ctx.setup.adapted.names,
        "weights": ctx.setup.weights,
        "classical": chart_run_json(&classical, render, p.universe()),
        "quantum": chart_run_json(&quantum, render, ctx.universe()),
        "classical_limit_residuals": residuals_json(&limit),
        "pass": pass,
    });
    Ok(Report { value, pass })
}

/// Restricts a presentation to Kazhdan degree `n`.
pub fn truncate_presentation(p: &WPresentation, n: u32) -> WPresentation {
    let keep: Vec<usize> = (0..p.generators.len()).filter(|&i| p.generators[i].weight <= n as i32).collect();
    let pos = |i: usize| keep.iter().position(|&k| k == i);
    WPresentation {
        method: p.method,
        order: n,
        generators: keep.iter().map(|&i| p.generators[i].clone()).collect(),
        filtered_dims: p.filtered_dims.iter().take(n as usize + 1).copied().collect(),
        products: p
            .products
            .iter()
            .filter_map(|(i, j, v)| Some((pos(*i)?, pos(*j)?, v.clone())))
            .collect(),
    }
}

pub fn presentation_json(p: &WPresentation, u: &Universe) -> Value {
    let (we, wo) = p.weight_signature();
    json!({
        "method": p.method,
        "order": p.order,
        "filtered_dims": p.filtered_dims,
        "weights": { "even": we, "odd": wo },
        "generators": p.generators.iter().map(|g| json!({
            "weight": g.weight,
            "parity": if g.parity.is_odd() { "odd" } else { "even" },
            "text": g.lift.render(u),
            "terms": poly_terms(&g.lift, u),
        })).collect::<Vec<_>>(),
        "products": p.products.iter().map(|(i, j, v)| json!({
            "i": i, "j": j, "text": v.render(u),
        })).collect::<Vec<_>>(),
    })
}

fn comparison_json(c: &Comparison) -> Value {
    json!({
        "dims_whittaker": c.dims_whittaker,
        "dims_slice": c.dims_slice,
        "dims_image": c.dims_image,
        "weights_match": c.weights_whittaker == c.weights_slice,
        "not_invariant": c.not_invariant,
        "change_of_basis": c.change_of_basis,
        "product_mismatches": c.product_mismatches,
        "products_skipped": c.products_skipped,
        "match": c.ok(),
    })
}

/// W-algebra by the chosen method; `Both` also compares the realizations and runs the
/// perturbation control picked by `seed`.
pub fn walgebra_report(
    g: &LieSuperalgebraData,
    compute: u32,
    render: u32,
    guard: u32,
    method: Method,
    seed: u64,
) -> Result<Report> {
    let ctx = WContext::new(g, false)?;
    let u = ctx.universe().clone();
    let mut value = json!({
        "algebra": g.name,
        "order": render,
        "method": method.name(),
        "complement": ctx.setup.adapted.names[..ctx.setup.n_complement],
        "m": ctx.setup.adapted.names[ctx.setup.n_complement..],
        "weights": ctx.setup.weights,
    });
    let mut pass = true;
    let whit = match method {
        Method::Whittaker | Method::Both => Some(whittaker_walgebra(&ctx, compute)?),
        Method::Slice => None,
    };
    let slice = match method {
        Method::Slice | Method::Both => Some(slice_walgebra(&ctx, compute, guard)?),
        Method::Whittaker => None,
    };
    if let Some(w) = &whit {
        let invariant = w.generators.iter().all(|gen| ctx.is_invariant(&gen.lift));
        pass &= invariant;
        value["whittaker"] = presentation_json(&truncate_presentation(w, render), &u);
        value["whittaker"]["invariant"] = json!(invariant);
    }
    if let Some((s, _)) = &slice {
        let invariant = s.generators.iter().all(|gen| ctx.is_invariant(&gen.lift));
        pass &= invariant;
        value["slice"] = presentation_json(&truncate_presentation(s, render), &u);
        value["slice"]["invariant"] = json!(invariant);
    }
    if let (Some(w), Some((s, data))) = (&whit, &slice) {
        let wt = truncate_presentation(w, render);
        let st = truncate_presentation(s, render);
        let c = compare_realizations(&ctx, &wt, &st, data);
        let detected = perturbation_detected(&ctx, &wt, &st, data, seed);
        pass &= c.ok() && detected;
        value["comparison"] = comparison_json(&c);
        value["comparison"]["perturbation_detected"] = json!(detected);
    }
    value["pass"] = json!(pass);
    Ok(Report { value, pass })
}

/// Splitting at filtration depth `depth` and the Clifford factorization.
///
/// The charts are built with precision `compute + guard`; checks run through `render`.
pub fn factorization_report(
    g: &LieSuperalgebraData,
    compute: u32,
    render: u32,
    depth: u32,
    guard: u32,
) -> Result<Report> {
    let ctx = WContext::new(g, false)?;
    let extra = compute.saturating_sub(render) + guard;
    let data = crate::wslice::slice_chart(&ctx, render, depth + extra)?;
    let split = splitting_check(&ctx, &data, render, depth)?;
    let cl = clifford_factorization(&ctx, render, extra)?;
    let order = render;
    let pass = split.ok() && cl.ok();
    let value = json!({
        "algebra": g.name,
        "order": order,
        "splitting": {
            "depth": split.depth,
            "monomials": split.monomials,
            "components": split.components,
            "components_unmapped": split.components_unmapped,
            "failures": split.failures.iter().map(|f| json!({ "monomial": f.monomial, "residual": f.residual })).collect::<Vec<_>>(),
            "components_not_invariant": split.components_not_invariant,
            "pass": split.ok(),
        },
        "clifford": {
            "dims_a_dagger": cl.dims_a_dagger,
            "dims_gr_expected": cl.dims_gr_expected,
            "dims_cl_w": cl.dims_cl_w,
            "chart_residuals": residuals_json(&cl.chart_residuals),
            "w0_generators": cl.w0_generators,
            "w0_not_central": cl.w0_not_central,
            "w0_product_mismatches": cl.w0_product_mismatches,
            "w0_products_open": cl.w0_products_open,
            "pass": cl.ok(),
        },
        "pass": pass,
    });
    Ok(Report { value, pass })
}
