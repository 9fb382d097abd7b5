use num_traits::One;
use std::collections::BTreeMap;

use super::slice::{slice_image, SliceData};
use super::whittaker::{generated_span, generator_monomials, MonomialEvaluator, WContext, WPresentation};
use crate::rational::{format_rational, Q};
use crate::supercore::{Parity, SuperPoly};

/// Outcome of matching the slice presentation against the Whittaker one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    pub dims_whittaker: Vec<usize>,
    pub dims_slice: Vec<usize>,
    /// Dimensions of the span of image monomials inside `U / I_chi`.
    pub dims_image: Vec<usize>,
    pub weights_whittaker: (Vec<i32>, Vec<i32>),
    pub weights_slice: (Vec<i32>, Vec<i32>),
    /// Slice generators that fail `(a - chi(a)) y in I_chi`.
    pub not_invariant: Vec<usize>,
    /// Each slice generator in Whittaker generator monomials, rendered; `None` if not in the span.
    pub change_of_basis: Vec<Option<String>>,
    /// Checked generator pairs whose mapped product differs from the product of the images.
    pub product_mismatches: Vec<(usize, usize)>,
    /// Pairs whose product could not be certified at the chart precision.
    pub products_skipped: Vec<(usize, usize)>,
}

impl Comparison {
    pub fn ok(&self) -> bool {
        self.dims_whittaker == self.dims_slice
            && self.dims_slice == self.dims_image
            && self.weights_whittaker == self.weights_slice
            && self.not_invariant.is_empty()
            && self.change_of_basis.iter().all(Option::is_some)
            && self.product_mismatches.is_empty()
    }
}

fn render_combo(combo: &BTreeMap<usize, Q>, monos: &[Vec<u16>]) -> String {
    if combo.is_empty() {
        return "0".into();
    }
    let parts: Vec<String> = combo
        .iter()
        .map(|(&k, c)| {
            let m: Vec<String> = monos[k]
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { format!("W{i}") } else { format!("W{i}^{e}") })
                .collect();
            match (m.is_empty(), c.is_one()) {
                (true, _) => format_rational(c),
                (false, true) => m.join("*"),
                (false, false) => format!("{}*{}", format_rational(c), m.join("*")),
            }
        })
        .collect();
    parts.join(" + ")
}

/// Compares the two realizations through Kazhdan degree `w.order`, checking generator
/// products of total weight `<= product_bound`.
///
/// `lifts` overrides the slice images (used for the perturbation control); products are
/// always taken from the chart, so a wrong image shows up as a product mismatch.
pub fn compare_with_lifts(
    ctx: &WContext,
    whit: &WPresentation,
    slice: &WPresentation,
    data: &SliceData,
    lifts: &[SuperPoly],
    product_bound: i32,
) -> Comparison {
    let n = whit.order as i32;
    let u = ctx.universe();
    let mut ev = MonomialEvaluator::default();
    let mut sl_gens = slice.generators.clone();
    for (g, l) in sl_gens.iter_mut().zip(lifts) {
        g.lift = l.clone();
    }
    let dims_image = (0..=n).map(|d| generated_span(ctx, &sl_gens, d, &mut ev).dim()).collect();
    let not_invariant = (0..lifts.len()).filter(|&i| !ctx.is_invariant(&lifts[i])).collect();

    let ww: Vec<i32> = whit.weights();
    let wp: Vec<Parity> = whit.generators.iter().map(|g| g.parity).collect();
    let wl: Vec<SuperPoly> = whit.generators.iter().map(|g| g.lift.clone()).collect();
    let monos = generator_monomials(&ww, &wp, n);
    let mut span = super::span::PolySpan::new();
    let mut wev = MonomialEvaluator::default();
    for m in &monos {
        span.insert(&wev.eval(ctx, &wl, m));
    }
    let change_of_basis = lifts.iter().map(|l| span.express(l).map(|c| render_combo(&c, &monos))).collect();

    // Centralizer index of each presented generator: slice generators keep chart order.
    let zs: Vec<&crate::supercore::TruncatedSeries> = data
        .chart
        .centralizer
        .iter()
        .filter(|z| z.poly.weights(u).first().is_none_or(|&w| w <= n))
        .collect();
    let mut product_mismatches = Vec::new();
    let mut products_skipped = Vec::new();
    for i in 0..lifts.len() {
        for j in i..lifts.len() {
            if slice.generators[i].weight + slice.generators[j].weight > product_bound {
                continue;
            }
            let zz = ctx.star.star_mul(zs[i], zs[j]);
            match slice_image(ctx, &zz) {
                Ok(lhs) => {
                    if lhs != ctx.wmul(&lifts[i], &lifts[j]) {
                        product_mismatches.push((i, j));
                    }
                }
                Err(_) => products_skipped.push((i, j)),
            }
        }
    }
    Comparison {
        dims_whittaker: whit.filtered_dims.clone(),
        dims_slice: slice.filtered_dims.clone(),
        dims_image,
        weights_whittaker: whit.weight_signature(),
        weights_slice: slice.weight_signature(),
        not_invariant,
        change_of_basis,
        product_mismatches,
        products_skipped,
    }
}

/// Matches the slice realization against the Whittaker one.
pub fn compare_realizations(ctx: &WContext, whit: &WPresentation, slice: &WPresentation, data: &SliceData) -> Comparison {
    let lifts: Vec<SuperPoly> = slice.generators.iter().map(|g| g.lift.clone()).collect();
    compare_with_lifts(ctx, whit, slice, data, &lifts, whit.order as i32)
}

/// Negative control: adds a complement variable to one slice generator and reports
/// whether the comparison notices. The generator and variable are picked by `seed`.
///
/// Products are checked up to the chart precision, so the verdict can only flip from
/// missed to detected as the precision grows.
pub fn perturbation_detected(
    ctx: &WContext,
    whit: &WPresentation,
    slice: &WPresentation,
    data: &SliceData,
    seed: u64,
) -> bool {
    let mut lifts: Vec<SuperPoly> = slice.generators.iter().map(|g| g.lift.clone()).collect();
    if lifts.is_empty() {
        return true;
    }
    let k = (seed as usize) % lifts.len();
    let parity = slice.generators[k].parity;
    let u = ctx.universe();
    let cands: Vec<usize> =
        (0..ctx.setup.n_complement).filter(|&v| Parity::from_odd(u.is_odd(v)) == parity).collect();
    let delta = match cands.as_slice() {
        [] => SuperPoly::one(u.len()),
        c => ctx.var(c[(seed as usize / lifts.len()) % c.len()]),
    };
    lifts[k] = lifts[k].add(&delta);
    !compare_with_lifts(ctx, whit, slice, data, &lifts, data.work as i32).ok()
}
